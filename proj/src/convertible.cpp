#include "splitconv/convertible.hpp"

#include <string>

#include "splitconv/combinations.hpp"
#include "splitconv/error.hpp"

namespace splitconv {

std::string_view case_name(ConversionCase c) {
  return c == ConversionCase::split_down ? "SPLIT_DOWN" : "SPLIT_UP";
}

ConversionParams derive_params(std::size_t n_initial, std::size_t k_initial, std::size_t n_final,
                               std::size_t k_final) {
  if (k_initial == 0 || k_final == 0 || n_initial <= k_initial || n_final <= k_final) {
    throw Error(Errc::invalid_argument, "need positive counts with nI > kI and nF > kF");
  }
  if (k_initial % k_final != 0 || k_initial / k_final < 2) {
    throw Error(Errc::not_split_regime, "kI=" + std::to_string(k_initial) + " is not lambda*kF=" +
                                            std::to_string(k_final) + " for an integer lambda >= 2");
  }
  ConversionParams p;
  p.n_initial = n_initial;
  p.k_initial = k_initial;
  p.n_final = n_final;
  p.k_final = k_final;
  p.lambda_final = k_initial / k_final;
  p.r_initial = n_initial - k_initial;
  p.r_final = n_final - k_final;
  if (p.r_final >= p.k_final) {
    throw Error(Errc::no_savings_region,
                "rF=" + std::to_string(p.r_final) + " >= kF=" + std::to_string(p.k_final) +
                    ": no conversion bandwidth savings are possible; use the default approach (re-encode)");
  }
  const std::size_t lambda = p.lambda_final;
  if (p.r_initial > p.r_final) {
    p.kind = ConversionCase::split_down;
    p.alpha = (lambda - 1) * p.r_final + p.r_initial;
    p.beta1 = (lambda - 1) * p.r_final;
    p.beta2 = lambda * p.r_final;
  } else {
    p.kind = ConversionCase::split_up;
    p.alpha = lambda * p.r_final;
    p.beta1 = lambda * p.r_final - p.r_initial;
    p.beta2 = lambda * p.r_final;
  }
  return p;
}

namespace {

void require_range(std::size_t value, std::size_t lo, std::size_t hi, const char* what) {
  if (value < lo || value > hi) {
    throw Error(Errc::out_of_range, std::string(what) + " " + std::to_string(value) + " outside [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void add_into(std::vector<Gf>& acc, const std::vector<Gf>& v, Gf scale = Gf(1)) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * v[i];
}

Gf codeword_scale(const EvaluationPoints& points, std::size_t parity, std::size_t codeword, std::size_t k_final) {
  return gf_pow(points.xi(parity), -static_cast<long long>((codeword - 1) * k_final));
}

// Sum over codewords of projections at each codeword's permuted instance.
std::vector<Gf> permuted_projection_sum(std::size_t parity, std::size_t instance, const ConversionParams& params,
                                        const EvaluationPoints& points) {
  std::vector<Gf> acc(params.alpha * params.k_initial);
  for (std::size_t i = 1; i <= params.lambda_final; ++i) {
    add_into(acc, projection_vector(i, parity, permuted_instance(instance, i, params), params, points));
  }
  return acc;
}

}  // namespace

BlockCoords block_coords(std::size_t instance, const ConversionParams& params) {
  require_range(instance, 1, params.alpha, "instance");
  const std::size_t rf = params.r_final;
  if (params.kind == ConversionCase::split_down && instance > params.lambda_final * rf) {
    return {params.lambda_final + 1, instance - params.lambda_final * rf};
  }
  return {(instance + rf - 1) / rf, (instance - 1) % rf + 1};
}

std::size_t permuted_instance(std::size_t instance, std::size_t codeword, const ConversionParams& params) {
  require_range(codeword, 1, params.lambda_final, "final codeword");
  const auto [block, offset] = block_coords(instance, params);
  if (block > params.lambda_final) {
    throw Error(Errc::out_of_range, "instance " + std::to_string(instance) + " lies in the unpermuted tail block");
  }
  const std::size_t lambda = params.lambda_final;
  const std::size_t shifted = (block + lambda - codeword) % lambda;
  return shifted * params.r_final + offset;
}

std::vector<Gf> projection_vector(std::size_t codeword, std::size_t parity, std::size_t instance,
                                  const ConversionParams& params, const EvaluationPoints& points) {
  require_range(codeword, 1, params.lambda_final, "final codeword");
  require_range(parity, 1, params.max_r(), "parity");
  require_range(instance, 1, params.alpha, "instance");
  const std::size_t alpha = params.alpha;
  const std::size_t kf = params.k_final;
  const auto h = parity_vector(parity, params.k_initial, points);
  std::vector<Gf> p(alpha * params.k_initial);
  for (std::size_t j = 1; j <= kf; ++j) {
    p[(codeword - 1) * kf * alpha + (j - 1) * alpha + (instance - 1)] = h[(codeword - 1) * kf + (j - 1)];
  }
  return p;
}

Gf piggyback_weight(std::size_t parity, std::size_t block, std::size_t offset, const EvaluationPoints& points,
                    std::size_t k_final) {
  // The retired parity is rescaled by xi_parity^{-(b-1)kF} during conversion;
  // the piggyback must come out scaled by its own xi_offset^{-(b-1)kF}.
  const long long e = static_cast<long long>((block - 1) * k_final);
  return gf_pow(points.xi(parity), e) * gf_pow(points.xi(offset), -e);
}

std::vector<Gf> initial_encoding_vector(std::size_t parity, std::size_t instance, const ConversionParams& params,
                                        const EvaluationPoints& points) {
  require_range(parity, 1, params.r_initial, "initial parity");
  const auto [block, offset] = block_coords(instance, params);
  const std::size_t rf = params.r_final;
  const std::size_t lambda = params.lambda_final;

  if (params.kind == ConversionCase::split_down) {
    if (block > lambda) {
      std::vector<Gf> acc(params.alpha * params.k_initial);
      for (std::size_t i = 1; i <= lambda; ++i) add_into(acc, projection_vector(i, parity, instance, params, points));
      return acc;
    }
    auto acc = permuted_projection_sum(parity, instance, params, points);
    if (parity > rf) {
      add_into(acc, projection_vector(block, offset, (lambda - 1) * rf + parity, params, points),
               piggyback_weight(parity, block, offset, points, params.k_final));
    }
    return acc;
  }

  auto acc = permuted_projection_sum(parity, instance, params, points);
  if (offset > params.r_initial) add_into(acc, projection_vector(block, offset, parity, params, points));
  return acc;
}

std::vector<Gf> final_encoding_vector(std::size_t codeword, std::size_t parity, std::size_t instance,
                                      const ConversionParams& params, const EvaluationPoints& points) {
  require_range(codeword, 1, params.lambda_final, "final codeword");
  require_range(parity, 1, params.r_final, "final parity");
  const auto [block, offset] = block_coords(instance, params);
  const std::size_t kf = params.k_final;

  std::vector<Gf> acc(params.alpha * params.k_initial);
  add_into(acc, projection_vector(codeword, parity, instance, params, points),
           codeword_scale(points, parity, codeword, kf));
  if (params.kind == ConversionCase::split_down && block > params.lambda_final) {
    const std::size_t extra_parity = params.r_final + offset;
    add_into(acc, projection_vector(codeword, extra_parity, parity, params, points),
             codeword_scale(points, extra_parity, codeword, kf));
  }
  return acc;
}

bool VectorCode::is_systematic() const {
  const std::size_t dim = alpha * k;
  if (generator.rows() != dim || generator.cols() != alpha * n) return false;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if (generator(r, c) != Gf(r == c ? 1 : 0)) return false;
  return true;
}

VectorCode build_initial_code(const ConversionParams& params, const EvaluationPoints& points) {
  const std::size_t alpha = params.alpha;
  const std::size_t dim = alpha * params.k_initial;
  VectorCode code{params.n_initial, params.k_initial, alpha, Matrix(dim, alpha * params.n_initial)};
  for (std::size_t r = 0; r < dim; ++r) code.generator(r, r) = Gf(1);
  for (std::size_t t = 1; t <= params.r_initial; ++t) {
    for (std::size_t l = 1; l <= alpha; ++l) {
      const auto q = initial_encoding_vector(t, l, params, points);
      const std::size_t col = code.column_index(params.k_initial + t - 1, l - 1);
      for (std::size_t r = 0; r < dim; ++r) code.generator(r, col) = q[r];
    }
  }
  return code;
}

VectorCode build_final_code(const ConversionParams& params, const EvaluationPoints& points) {
  const std::size_t alpha = params.alpha;
  const std::size_t dim = alpha * params.k_final;
  VectorCode code{params.n_final, params.k_final, alpha, Matrix(dim, alpha * params.n_final)};
  for (std::size_t r = 0; r < dim; ++r) code.generator(r, r) = Gf(1);

  for (std::size_t t = 1; t <= params.r_final; ++t) {
    for (std::size_t l = 1; l <= alpha; ++l) {
      const std::size_t col = code.column_index(params.k_final + t - 1, l - 1);
      for (std::size_t i = 1; i <= params.lambda_final; ++i) {
        const auto q = final_encoding_vector(i, t, l, params, points);
        const std::size_t begin = (i - 1) * dim;
        for (std::size_t r = 0; r < q.size(); ++r) {
          const bool inside = r >= begin && r < begin + dim;
          if (!inside) {
            if (!q[r].is_zero()) {
              throw Error(Errc::invariant_violation, "final parity of codeword " + std::to_string(i) +
                                                         " touches data of another codeword");
            }
            continue;
          }
          if (i == 1) {
            code.generator(r, col) = q[r];
          } else if (code.generator(r - begin, col) != q[r]) {
            throw Error(Errc::invariant_violation,
                        "final codeword " + std::to_string(i) + " parity " + std::to_string(t) + " instance " +
                            std::to_string(l) + " differs from codeword 1: final codes are not shared");
          }
        }
      }
    }
  }
  return code;
}

bool verify_mds_vector(const VectorCode& code) {
  const std::size_t alpha = code.alpha;
  const std::size_t dim = alpha * code.k;
  if (!code.is_systematic()) {
    return for_each_subset(code.n, code.k, [&](std::span<const std::size_t> symbols) {
      std::vector<std::size_t> cols;
      for (auto s : symbols)
        for (std::size_t l = 0; l < alpha; ++l) cols.push_back(code.column_index(s, l));
      return rank(code.generator.select_columns(cols)) == dim;
    });
  }
  // With identity data columns, the alpha*k square system is invertible iff
  // the parity columns restricted to the erased data coordinates are.
  return for_each_subset(code.n, code.k, [&](std::span<const std::size_t> symbols) {
    std::vector<bool> present(code.k, false);
    std::vector<std::size_t> parity_cols;
    for (auto s : symbols) {
      if (s < code.k) {
        present[s] = true;
      } else {
        for (std::size_t l = 0; l < alpha; ++l) parity_cols.push_back(code.column_index(s, l));
      }
    }
    if (parity_cols.empty()) return true;
    std::vector<std::size_t> erased_rows;
    for (std::size_t s = 0; s < code.k; ++s) {
      if (present[s]) continue;
      for (std::size_t l = 0; l < alpha; ++l) erased_rows.push_back(s * alpha + l);
    }
    const Matrix sub = code.generator.select_columns(parity_cols).select_rows(erased_rows);
    return rank(sub) == parity_cols.size();
  });
}

EvaluationPoints construction_points(const ConversionParams& params, bool verify_vector_codes) {
  PointsFilter accept;
  if (verify_vector_codes) {
    accept = [&params](const EvaluationPoints& points) {
      return verify_mds_vector(build_initial_code(params, points)) &&
             verify_mds_vector(build_final_code(params, points));
    };
  }
  return search_points(params.n_initial, params.k_initial, params.max_r(), accept);
}

}  // namespace splitconv
