#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace splitconv {

struct ConversionParams;

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Parses "3/8", "0.375" or "2" exactly. Throws Error(invalid_argument).
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

/// Bound-side view of the conversion parameters. Every bound below is a
/// rational multiple of alpha and is returned as that multiple.
struct BoundInputs {
  std::int64_t lambda_final = 0;
  std::int64_t k_final = 0;
  std::int64_t r_initial = 0;
  std::int64_t r_final = 0;

  /// Throws Error(invalid_argument) unless lambda >= 2 and all counts > 0.
  static BoundInputs make(std::int64_t lambda_final, std::int64_t k_final, std::int64_t r_initial,
                          std::int64_t r_final);
  static BoundInputs from(const ConversionParams& params);
};

/// Per-symbol download sizes as fractions of alpha.
struct BetaAssignment {
  Rational beta1;  // from each unchanged symbol
  Rational beta2;  // from each retired symbol

  friend bool operator==(const BetaAssignment&, const BetaAssignment&) = default;
};

/// lambda*kF*beta1 + rI*beta2.
Rational gamma_read(const BoundInputs& b, const BetaAssignment& betas);

Rational gamma_read_default(const BoundInputs& b);
Rational gamma_read_access_optimal(const BoundInputs& b);

/// Lower bound from the information-flow cut alone.
Rational bound_loose(const BoundInputs& b);

/// Lower bound once lambda*beta1 >= (lambda-1)*beta2 is imposed. Defined for
/// rI >= rF and rF <= kF; throws Error(bound_region) elsewhere.
Rational bound_tight(const BoundInputs& b);

/// bound_tight where rI >= rF, bound_loose otherwise.
Rational bound_combined(const BoundInputs& b);

bool savings_possible(const BoundInputs& b);

/// lambda*min(rF,kF) <= lambda*min(rF,kF)*beta1 + rI*beta2.
bool satisfies_flow_constraint(const BoundInputs& b, const BetaAssignment& betas);

/// lambda*beta1 >= (lambda-1)*beta2.
bool satisfies_interference_constraint(const BoundInputs& b, const BetaAssignment& betas);

/// Closed-form minimisers of gamma_read. Throws Error(no_savings_region) for rF >= kF.
BetaAssignment optimal_betas(const BoundInputs& b, bool assume_conjecture);

/// Exhaustive scan of {0, 1/steps, ..., 1}^2. Ties go to the smaller beta1,
/// then the smaller beta2. Throws Error(invalid_argument) for steps < 100.
BetaAssignment grid_search_betas(const BoundInputs& b, bool assume_conjecture, std::size_t steps);

struct CurvePoint {
  Rational rf_over_ri;
  Rational rel_default;
  Rational rel_access_opt;
  Rational rel_bound;
  bool achievable = false;
};

/// Read bandwidth relative to the default approach, for lambda and rI/kI fixed
/// and rF/rI sampled uniformly over (0, (lambda*rI/kI)^{-1}]. A point is
/// achievable when, at final-code dimension example_kf, it corresponds to
/// integral rI and 1 <= rF < kF. Without example_kf the smallest kF >= 2
/// giving an integral rI is used.
std::vector<CurvePoint> curve(std::int64_t lambda_final, const Rational& ri_over_ki, std::size_t samples,
                              std::optional<std::int64_t> example_kf = std::nullopt);

/// Example kF used by curve() when none is given.
std::int64_t default_example_kf(std::int64_t lambda_final, const Rational& ri_over_ki);

}  // namespace splitconv
