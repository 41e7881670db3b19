#include "splitconv/conversion.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "splitconv/error.hpp"
#include "splitconv/matrix.hpp"

namespace splitconv {

Codeword encode(const VectorCode& code, std::span<const Gf> message) {
  const std::size_t dim = code.alpha * code.k;
  if (message.size() != dim) {
    throw Error(Errc::dimension_mismatch, "message has " + std::to_string(message.size()) +
                                              " subsymbols, code expects " + std::to_string(dim));
  }
  Codeword cw(code.n, code.k, code.alpha);
  for (std::size_t r = 0; r < dim; ++r) axpy(message[r], code.generator.row(r), cw.subsymbols);
  return cw;
}

std::vector<Gf> decode(const VectorCode& code, std::span<const SymbolData> available) {
  if (available.size() != code.k) {
    throw Error(Errc::invalid_argument, "decode needs exactly " + std::to_string(code.k) + " symbols, got " +
                                            std::to_string(available.size()));
  }
  const std::size_t dim = code.alpha * code.k;
  std::set<std::size_t> seen;
  std::vector<std::size_t> cols;
  Matrix rhs(dim, 1);
  std::size_t row = 0;
  for (const auto& sym : available) {
    if (sym.index >= code.n || !seen.insert(sym.index).second) {
      throw Error(Errc::invalid_argument, "symbol index " + std::to_string(sym.index) + " is out of range or repeated");
    }
    if (sym.subsymbols.size() != code.alpha) {
      throw Error(Errc::dimension_mismatch, "symbol " + std::to_string(sym.index) + " has the wrong subsymbol count");
    }
    for (std::size_t l = 0; l < code.alpha; ++l) {
      cols.push_back(code.column_index(sym.index, l));
      rhs(row++, 0) = sym.subsymbols[l];
    }
  }
  // m * G_S = y  <=>  G_S^T * m^T = y^T
  Matrix solution;
  try {
    solution = solve_linear(code.generator.select_columns(cols).transposed(), std::move(rhs));
  } catch (const SingularMatrixError& e) {
    throw Error(Errc::invariant_violation, std::string("code is not MDS for the chosen symbols: ") + e.what());
  }
  return solution.column(0);
}

std::size_t DownloadPlan::total() const {
  std::size_t n = 0;
  for (const auto& s : symbols) n += s.instances.size();
  return n;
}

bool DownloadPlan::permits(std::size_t symbol, std::size_t instance) const {
  if (symbol >= symbols.size()) return false;
  for (auto l : symbols[symbol].instances)
    if (l == instance) return true;
  return false;
}

DownloadPlan make_download_plan(const ConversionParams& params) {
  const std::size_t rf = params.r_final;
  const std::size_t ri = params.r_initial;
  const std::size_t lambda = params.lambda_final;
  std::vector<std::size_t> unchanged;
  std::vector<std::size_t> retired;
  if (params.kind == ConversionCase::split_down) {
    // Blocks 2..lambda of every data symbol; blocks 1..lambda of every parity.
    for (std::size_t l = rf; l < lambda * rf; ++l) unchanged.push_back(l);
    for (std::size_t l = 0; l < lambda * rf; ++l) retired.push_back(l);
  } else {
    // First rI columns of blocks 2..lambda plus columns rI+1..rF of every block.
    for (std::size_t l = 0; l < params.alpha; ++l) {
      const std::size_t block = l / rf;
      const std::size_t offset = l % rf;
      if (block > 0 || offset >= ri) unchanged.push_back(l);
    }
    for (std::size_t l = 0; l < params.alpha; ++l) retired.push_back(l);
  }
  DownloadPlan plan;
  for (std::size_t s = 0; s < params.n_initial; ++s) {
    if (s < params.k_initial) {
      plan.symbols.push_back({s, SymbolRole::unchanged, s / params.k_final + 1, unchanged});
    } else {
      plan.symbols.push_back({s, SymbolRole::retired, 0, retired});
    }
  }
  return plan;
}

DownloadPlan make_default_plan(const ConversionParams& params) {
  std::vector<std::size_t> all(params.alpha);
  for (std::size_t l = 0; l < params.alpha; ++l) all[l] = l;
  DownloadPlan plan;
  for (std::size_t s = 0; s < params.n_initial; ++s) {
    if (s < params.k_initial) {
      plan.symbols.push_back({s, SymbolRole::unchanged, s / params.k_final + 1, all});
    } else {
      plan.symbols.push_back({s, SymbolRole::retired, 0, {}});
    }
  }
  return plan;
}

std::vector<Gf> message_slice(std::span<const Gf> message, std::size_t codeword, const ConversionParams& params) {
  const std::size_t len = params.alpha * params.k_final;
  const auto first = message.begin() + static_cast<std::ptrdiff_t>((codeword - 1) * len);
  return {first, first + static_cast<std::ptrdiff_t>(len)};
}

namespace {

// The converter's view of the initial codeword: exactly the planned
// subsymbols, fetched once. Anything else is unreachable.
class Downloads {
 public:
  Downloads(const Codeword& source, const DownloadPlan& plan)
      : alpha_(source.alpha), values_(source.subsymbols.size()), present_(values_.size()), used_(values_.size()) {
    for (const auto& sym : plan.symbols) {
      for (auto l : sym.instances) {
        if (sym.symbol >= source.n || l >= alpha_) {
          throw Error(Errc::plan_violation, "download plan references a subsymbol outside the codeword");
        }
        const std::size_t idx = sym.symbol * alpha_ + l;
        if (present_[idx]) continue;
        values_[idx] = source.at(sym.symbol, l);
        present_[idx] = true;
        ++count_;
      }
    }
  }

  Gf read(std::size_t symbol, std::size_t instance) {
    const std::size_t idx = symbol * alpha_ + instance;
    if (idx >= present_.size() || !present_[idx]) {
      throw Error(Errc::plan_violation, "conversion attempted to read unplanned subsymbol (" + std::to_string(symbol) +
                                            ", " + std::to_string(instance) + ")");
    }
    used_[idx] = true;
    return values_[idx];
  }

  std::size_t count() const { return count_; }

  std::size_t unused() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < present_.size(); ++i) n += present_[i] && !used_[i];
    return n;
  }

 private:
  std::size_t alpha_;
  std::vector<Gf> values_;
  std::vector<bool> present_;
  std::vector<bool> used_;
  std::size_t count_ = 0;
};

void check_shape(const Codeword& initial, const ConversionParams& params) {
  if (initial.n != params.n_initial || initial.k != params.k_initial || initial.alpha != params.alpha ||
      initial.subsymbols.size() != params.n_initial * params.alpha) {
    throw Error(Errc::dimension_mismatch, "initial codeword shape does not match the conversion parameters");
  }
}

BandwidthReport make_report(const ConversionParams& params, std::size_t downloaded) {
  const auto b = BoundInputs::from(params);
  const Rational alpha(static_cast<std::int64_t>(params.alpha));
  BandwidthReport r;
  r.downloaded_subsymbols = downloaded;
  r.written_subsymbols = params.lambda_final * params.r_final * params.alpha;
  r.gamma_r = r.downloaded_subsymbols;
  r.gamma_w = r.written_subsymbols;
  r.gamma = r.gamma_r + r.gamma_w;
  r.baseline_default = static_cast<std::size_t>(boost::rational_cast<std::int64_t>(gamma_read_default(b) * alpha));
  r.baseline_access_optimal =
      static_cast<std::size_t>(boost::rational_cast<std::int64_t>(gamma_read_access_optimal(b) * alpha));
  r.bound_loose = bound_loose(b) * alpha;
  if (b.r_initial >= b.r_final) r.bound_tight = bound_tight(b) * alpha;
  return r;
}

std::vector<Codeword> with_unchanged_symbols(const Codeword& initial, const ConversionParams& params) {
  std::vector<Codeword> finals;
  for (std::size_t i = 0; i < params.lambda_final; ++i) {
    Codeword cw(params.n_final, params.k_final, params.alpha);
    for (std::size_t j = 0; j < params.k_final; ++j) {
      const auto src = initial.symbol(i * params.k_final + j);
      std::copy(src.begin(), src.end(), cw.symbol(j).begin());
    }
    finals.push_back(std::move(cw));
  }
  return finals;
}

// Writes new parity subsymbols of the final codewords, each exactly once.
class NewSymbolWriter {
 public:
  NewSymbolWriter(std::vector<Codeword>& finals, const ConversionParams& params)
      : finals_(finals), params_(params),
        written_(params.lambda_final * params.r_final * params.alpha, false) {}

  // codeword, parity 1-based; instance 1-based.
  void put(std::size_t codeword, std::size_t parity, std::size_t instance, Gf value) {
    const std::size_t idx = ((codeword - 1) * params_.r_final + (parity - 1)) * params_.alpha + (instance - 1);
    if (written_[idx]) throw Error(Errc::invariant_violation, "new subsymbol written twice");
    written_[idx] = true;
    finals_[codeword - 1].at(params_.k_final + parity - 1, instance - 1) = value;
  }

  bool written(std::size_t codeword, std::size_t parity, std::size_t instance) const {
    return written_[((codeword - 1) * params_.r_final + (parity - 1)) * params_.alpha + (instance - 1)];
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (bool w : written_) n += w;
    return n;
  }

 private:
  std::vector<Codeword>& finals_;
  const ConversionParams& params_;
  std::vector<bool> written_;
};

}  // namespace

ConversionResult convert(const Codeword& initial, const ConversionParams& params, const EvaluationPoints& points) {
  return convert(initial, params, points, make_download_plan(params));
}

ConversionResult convert(const Codeword& initial, const ConversionParams& params, const EvaluationPoints& points,
                         const DownloadPlan& plan) {
  check_shape(initial, params);
  const std::size_t kf = params.k_final;
  const std::size_t ki = params.k_initial;
  const std::size_t rf = params.r_final;
  const std::size_t ri = params.r_initial;
  const std::size_t lambda = params.lambda_final;
  const std::size_t alpha = params.alpha;

  std::vector<std::vector<Gf>> h(params.max_r() + 1);
  for (std::size_t t = 1; t <= params.max_r(); ++t) h[t] = parity_vector(t, ki, points);
  auto scale = [&](std::size_t parity, std::size_t codeword) {
    return gf_pow(points.xi(parity), -static_cast<long long>((codeword - 1) * kf));
  };

  Downloads dl(initial, plan);
  // Base-code parity t over codeword i's data at raw instance l (1-based).
  auto base = [&](std::size_t codeword, std::size_t parity, std::size_t instance) {
    Gf acc;
    for (std::size_t j = 0; j < kf; ++j) {
      const std::size_t sym = (codeword - 1) * kf + j;
      acc += h[parity][sym] * dl.read(sym, instance - 1);
    }
    return acc;
  };
  // Retired parity t at instance l minus every codeword's permuted contribution
  // except `keep` (0 strips all of them).
  auto strip_interference = [&](std::size_t parity, std::size_t instance, std::size_t keep) {
    Gf v = dl.read(ki + parity - 1, instance - 1);
    for (std::size_t i = 1; i <= lambda; ++i) {
      if (i != keep) v -= base(i, parity, permuted_instance(instance, i, params));
    }
    return v;
  };

  auto finals = with_unchanged_symbols(initial, params);
  NewSymbolWriter out(finals, params);

  if (params.kind == ConversionCase::split_down) {
    for (std::size_t i = 1; i <= lambda; ++i) {
      // Projection: block i of parity t holds codeword i's first block.
      for (std::size_t t = 1; t <= rf; ++t) {
        for (std::size_t l = 1; l <= rf; ++l) {
          out.put(i, t, l, scale(t, i) * strip_interference(t, (i - 1) * rf + l, i));
        }
      }
      // Piggybacks: parity rF+u, block i, offset t carries tail instance u of
      // final parity t plus the extra data term.
      for (std::size_t u = 1; u <= ri - rf; ++u) {
        const std::size_t t_initial = rf + u;
        for (std::size_t t = 1; t <= rf; ++t) {
          const Gf v = strip_interference(t_initial, (i - 1) * rf + t, i);
          out.put(i, t, lambda * rf + u, scale(t_initial, i) * v);
        }
      }
      // Everything else comes straight from downloaded blocks 2..lambda.
      for (std::size_t t = 1; t <= rf; ++t) {
        for (std::size_t l = rf + 1; l <= lambda * rf; ++l) out.put(i, t, l, scale(t, i) * base(i, t, l));
      }
    }
  } else {
    for (std::size_t i = 1; i <= lambda; ++i) {
      for (std::size_t t = 1; t <= ri; ++t) {
        for (std::size_t o = 1; o <= ri; ++o) {
          out.put(i, t, o, scale(t, i) * strip_interference(t, (i - 1) * rf + o, i));
        }
      }
      // Parity t > rI at instance o <= rI rides as a piggyback on initial
      // parity o, block i, offset t.
      for (std::size_t t = ri + 1; t <= rf; ++t) {
        for (std::size_t o = 1; o <= ri; ++o) {
          out.put(i, t, o, scale(t, i) * strip_interference(o, (i - 1) * rf + t, 0));
        }
      }
      for (std::size_t t = 1; t <= rf; ++t) {
        for (std::size_t l = 1; l <= alpha; ++l) {
          if (!out.written(i, t, l)) out.put(i, t, l, scale(t, i) * base(i, t, l));
        }
      }
    }
  }

  if (out.count() != lambda * rf * alpha) {
    throw Error(Errc::invariant_violation, "conversion left new subsymbols unwritten");
  }
  ConversionResult result;
  result.finals = std::move(finals);
  result.report = make_report(params, dl.count());
  result.unused_downloads = dl.unused();
  return result;
}

ConversionResult convert_default(const Codeword& initial, const ConversionParams& params,
                                 const EvaluationPoints& points) {
  check_shape(initial, params);
  Downloads dl(initial, make_default_plan(params));
  const auto final_code = build_final_code(params, points);
  ConversionResult result;
  for (std::size_t i = 0; i < params.lambda_final; ++i) {
    std::vector<Gf> slice;
    slice.reserve(params.k_final * params.alpha);
    for (std::size_t j = 0; j < params.k_final; ++j)
      for (std::size_t l = 0; l < params.alpha; ++l) slice.push_back(dl.read(i * params.k_final + j, l));
    result.finals.push_back(encode(final_code, slice));
  }
  result.report = make_report(params, dl.count());
  result.unused_downloads = dl.unused();
  return result;
}

}  // namespace splitconv
