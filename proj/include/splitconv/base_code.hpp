#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "splitconv/gf256.hpp"
#include "splitconv/matrix.hpp"

namespace splitconv {

/// Vandermonde evaluation points xi_1..xi_r. Parity indices are 1-based.
class EvaluationPoints {
 public:
  EvaluationPoints() = default;

  /// Throws Error(invalid_argument) unless all points are nonzero and distinct.
  explicit EvaluationPoints(std::vector<Gf> points);

  /// Skips validation; used to load points that are then checked for MDS.
  static EvaluationPoints unchecked(std::vector<Gf> points);

  bool is_valid() const;

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// xi_t for t in [1, size()].
  Gf xi(std::size_t t) const;

  std::span<const Gf> values() const { return points_; }

  friend bool operator==(const EvaluationPoints&, const EvaluationPoints&) = default;

 private:
  std::vector<Gf> points_;
};

/// [n, k] systematic code with generator [I | P], P column t = h_t.
struct ScalarCode {
  std::size_t n = 0;
  std::size_t k = 0;
  Matrix generator;
};

/// h_t = (1, xi_t, ..., xi_t^(k-1)).
std::vector<Gf> parity_vector(std::size_t t, std::size_t k, const EvaluationPoints& points);

ScalarCode build_systematic_code(std::size_t n, std::size_t k, const EvaluationPoints& points);

/// Exhaustive: every k-subset of generator columns has rank k.
bool verify_mds_scalar(const ScalarCode& code);

using PointsFilter = std::function<bool(const EvaluationPoints&)>;

/// Lexicographically first max_r-tuple of distinct nonzero points for which the
/// [k + max_r, k] systematic Vandermonde code is MDS and `accept` (if given)
/// holds. Throws Error(search_failure) when the field is exhausted.
EvaluationPoints search_points(std::size_t n, std::size_t k, std::size_t max_r, const PointsFilter& accept = {});

/// h_t[1..kF] == xi_t^{-(i-1)kF} * h_t[(i-1)kF+1 .. i*kF] for every t and i.
bool check_prefix_scaling(const EvaluationPoints& points, std::size_t k_final, std::size_t lambda_final);

}  // namespace splitconv
