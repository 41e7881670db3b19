#include "splitconv/base_code.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "splitconv/combinations.hpp"
#include "splitconv/error.hpp"

namespace splitconv {

EvaluationPoints::EvaluationPoints(std::vector<Gf> points) : points_(std::move(points)) {
  if (!is_valid()) throw Error(Errc::invalid_argument, "evaluation points must be nonzero and pairwise distinct");
}

EvaluationPoints EvaluationPoints::unchecked(std::vector<Gf> points) {
  EvaluationPoints p;
  p.points_ = std::move(points);
  return p;
}

bool EvaluationPoints::is_valid() const {
  std::set<Gf> seen;
  for (Gf x : points_) {
    if (x.is_zero() || !seen.insert(x).second) return false;
  }
  return true;
}

Gf EvaluationPoints::xi(std::size_t t) const {
  if (t < 1 || t > points_.size()) {
    throw Error(Errc::out_of_range,
                "parity index " + std::to_string(t) + " outside [1, " + std::to_string(points_.size()) + "]");
  }
  return points_[t - 1];
}

std::vector<Gf> parity_vector(std::size_t t, std::size_t k, const EvaluationPoints& points) {
  const Gf xi = points.xi(t);
  std::vector<Gf> h(k);
  Gf power(1);
  for (std::size_t j = 0; j < k; ++j) {
    h[j] = power;
    power *= xi;
  }
  return h;
}

ScalarCode build_systematic_code(std::size_t n, std::size_t k, const EvaluationPoints& points) {
  if (k < 1 || n < k) {
    throw Error(Errc::invalid_argument, "systematic code needs n >= k >= 1, got n=" + std::to_string(n) +
                                            " k=" + std::to_string(k));
  }
  if (points.size() != n - k) {
    throw Error(Errc::invalid_argument, "expected " + std::to_string(n - k) + " evaluation points, got " +
                                            std::to_string(points.size()));
  }
  ScalarCode code{n, k, Matrix(k, n)};
  for (std::size_t j = 0; j < k; ++j) code.generator(j, j) = Gf(1);
  for (std::size_t t = 1; t <= n - k; ++t) {
    const auto h = parity_vector(t, k, points);
    for (std::size_t j = 0; j < k; ++j) code.generator(j, k + t - 1) = h[j];
  }
  return code;
}

bool verify_mds_scalar(const ScalarCode& code) {
  return for_each_subset(code.n, code.k, [&](std::span<const std::size_t> cols) {
    return rank(code.generator.select_columns(cols)) == code.k;
  });
}

namespace {

// [I | P] is MDS iff every square submatrix of P is nonsingular. Only the
// minors touching the newest column need checking when extending a prefix
// that already passed.
bool newest_column_minors_ok(const std::vector<Gf>& chosen, std::size_t k) {
  const std::size_t r = chosen.size();
  const std::size_t newest = r - 1;
  std::vector<std::vector<Gf>> powers(r, std::vector<Gf>(k));
  for (std::size_t t = 0; t < r; ++t) {
    Gf p(1);
    for (std::size_t j = 0; j < k; ++j) {
      powers[t][j] = p;
      p *= chosen[t];
    }
  }
  for (std::size_t size = 1; size <= std::min(k, r); ++size) {
    const bool ok = for_each_subset(newest, size - 1, [&](std::span<const std::size_t> others) {
      std::vector<std::size_t> cols(others.begin(), others.end());
      cols.push_back(newest);
      return for_each_subset(k, size, [&](std::span<const std::size_t> rows) {
        Matrix minor(size, size);
        for (std::size_t a = 0; a < size; ++a)
          for (std::size_t b = 0; b < size; ++b) minor(a, b) = powers[cols[b]][rows[a]];
        return rank(std::move(minor)) == size;
      });
    });
    if (!ok) return false;
  }
  return true;
}

bool extend(std::vector<Gf>& chosen, std::size_t k, std::size_t max_r, const PointsFilter& accept) {
  if (chosen.size() == max_r) {
    return !accept || accept(EvaluationPoints(chosen));
  }
  const unsigned start = chosen.empty() ? 1U : chosen.back().value() + 1U;
  for (unsigned v = start; v < 256; ++v) {
    chosen.emplace_back(static_cast<std::uint8_t>(v));
    if (newest_column_minors_ok(chosen, k) && extend(chosen, k, max_r, accept)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

EvaluationPoints search_points(std::size_t n, std::size_t k, std::size_t max_r, const PointsFilter& accept) {
  if (k < 1 || n < k || max_r < n - k) {
    throw Error(Errc::invalid_argument, "search_points needs n >= k >= 1 and max_r >= n - k");
  }
  std::vector<Gf> chosen;
  if (!extend(chosen, k, max_r, accept)) {
    std::ostringstream msg;
    msg << "no MDS evaluation points in GF(256) with polynomial 0x" << std::hex << gf::polynomial() << std::dec
        << " for k=" << k << " r=" << max_r;
    throw Error(Errc::search_failure, msg.str());
  }
  EvaluationPoints points(std::move(chosen));
  if (!verify_mds_scalar(build_systematic_code(k + max_r, k, points))) {
    throw Error(Errc::invariant_violation, "searched points failed exhaustive MDS verification");
  }
  return points;
}

bool check_prefix_scaling(const EvaluationPoints& points, std::size_t k_final, std::size_t lambda_final) {
  const std::size_t k_initial = k_final * lambda_final;
  for (std::size_t t = 1; t <= points.size(); ++t) {
    const auto h = parity_vector(t, k_initial, points);
    for (std::size_t i = 1; i <= lambda_final; ++i) {
      const Gf scale = gf_pow(points.xi(t), -static_cast<long long>((i - 1) * k_final));
      for (std::size_t j = 0; j < k_final; ++j) {
        if (h[j] != scale * h[(i - 1) * k_final + j]) return false;
      }
    }
  }
  return true;
}

}  // namespace splitconv
