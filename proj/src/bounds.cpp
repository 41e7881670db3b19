#include "splitconv/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "splitconv/convertible.hpp"
#include "splitconv/error.hpp"

namespace splitconv {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace {

std::int64_t parse_digits(const std::string& text, std::size_t begin, std::size_t end, const std::string& whole) {
  if (begin == end || end - begin > 17) throw Error(Errc::invalid_argument, "cannot parse rational '" + whole + "'");
  std::int64_t v = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(Errc::invalid_argument, "cannot parse rational '" + whole + "'");
    }
    v = v * 10 + (text[i] - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::size_t start = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    start = 1;
  }
  Rational value;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_digits(text, start, slash, text);
    const auto den = parse_digits(text, slash + 1, text.size(), text);
    if (den == 0) throw Error(Errc::invalid_argument, "zero denominator in '" + text + "'");
    value = Rational(num, den);
  } else if (const auto dot = text.find('.'); dot != std::string::npos) {
    const auto whole = dot == start ? 0 : parse_digits(text, start, dot, text);
    const auto frac = parse_digits(text, dot + 1, text.size(), text);
    std::int64_t scale = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
    value = Rational(whole) + Rational(frac, scale);
  } else {
    value = Rational(parse_digits(text, start, text.size(), text));
  }
  return negative ? -value : value;
}

BoundInputs BoundInputs::make(std::int64_t lambda_final, std::int64_t k_final, std::int64_t r_initial,
                              std::int64_t r_final) {
  if (lambda_final < 2 || k_final < 1 || r_initial < 1 || r_final < 1) {
    throw Error(Errc::invalid_argument, "bound inputs need lambda >= 2 and positive kF, rI, rF");
  }
  return BoundInputs{lambda_final, k_final, r_initial, r_final};
}

BoundInputs BoundInputs::from(const ConversionParams& params) {
  return make(static_cast<std::int64_t>(params.lambda_final), static_cast<std::int64_t>(params.k_final),
              static_cast<std::int64_t>(params.r_initial), static_cast<std::int64_t>(params.r_final));
}

Rational gamma_read(const BoundInputs& b, const BetaAssignment& betas) {
  return Rational(b.lambda_final * b.k_final) * betas.beta1 + Rational(b.r_initial) * betas.beta2;
}

Rational gamma_read_default(const BoundInputs& b) { return Rational(b.lambda_final * b.k_final); }

Rational gamma_read_access_optimal(const BoundInputs& b) {
  if (b.r_initial >= b.r_final) return Rational((b.lambda_final - 1) * b.k_final + b.r_final);
  return Rational(b.lambda_final * b.k_final);
}

Rational bound_loose(const BoundInputs& b) {
  if (b.r_initial <= b.lambda_final * b.r_final) {
    const Rational excess = std::max(Rational(b.k_final, b.r_final) - 1, Rational(0));
    return Rational(b.lambda_final * b.k_final) - Rational(b.r_initial) * excess;
  }
  return Rational(b.lambda_final * std::min(b.r_final, b.k_final));
}

Rational bound_tight(const BoundInputs& b) {
  if (b.r_initial < b.r_final || b.r_final > b.k_final) {
    throw Error(Errc::bound_region, "bound_tight needs rI >= rF and rF <= kF; use bound_loose here");
  }
  const std::int64_t l = b.lambda_final;
  return Rational(l * b.r_final) * Rational((l - 1) * b.k_final + b.r_initial, (l - 1) * b.r_final + b.r_initial);
}

Rational bound_combined(const BoundInputs& b) {
  return b.r_initial >= b.r_final ? bound_tight(b) : bound_loose(b);
}

bool savings_possible(const BoundInputs& b) { return b.r_final < b.k_final; }

bool satisfies_flow_constraint(const BoundInputs& b, const BetaAssignment& betas) {
  const std::int64_t m = b.lambda_final * std::min(b.r_final, b.k_final);
  return Rational(m) <= Rational(m) * betas.beta1 + Rational(b.r_initial) * betas.beta2;
}

bool satisfies_interference_constraint(const BoundInputs& b, const BetaAssignment& betas) {
  return Rational(b.lambda_final) * betas.beta1 >= Rational(b.lambda_final - 1) * betas.beta2;
}

BetaAssignment optimal_betas(const BoundInputs& b, bool assume_conjecture) {
  if (!savings_possible(b)) {
    throw Error(Errc::no_savings_region, "rF >= kF: the default approach is already optimal");
  }
  const std::int64_t l = b.lambda_final;
  if (assume_conjecture && b.r_initial >= b.r_final) {
    const std::int64_t denom = (l - 1) * b.r_final + b.r_initial;
    return {Rational((l - 1) * b.r_final, denom), Rational(l * b.r_final, denom)};
  }
  return {std::max(Rational(1) - Rational(b.r_initial, l * b.r_final), Rational(0)),
          std::min(Rational(1), Rational(l * b.r_final, b.r_initial))};
}

BetaAssignment grid_search_betas(const BoundInputs& b, bool assume_conjecture, std::size_t steps) {
  if (steps < 100) throw Error(Errc::invalid_argument, "grid search needs at least 100 steps");
  // Work on integer grid coordinates: beta = index / steps.
  const std::int64_t n = static_cast<std::int64_t>(steps);
  const std::int64_t l = b.lambda_final;
  const std::int64_t m = l * std::min(b.r_final, b.k_final);
  std::int64_t best_a = n;
  std::int64_t best_b = n;
  std::int64_t best_cost = l * b.k_final * n + b.r_initial * n;
  for (std::int64_t a = 0; a <= n; ++a) {
    for (std::int64_t c = 0; c <= n; ++c) {
      if (m * n > m * a + b.r_initial * c) continue;
      if (assume_conjecture && l * a < (l - 1) * c) continue;
      const std::int64_t cost = l * b.k_final * a + b.r_initial * c;
      if (cost < best_cost) {
        best_cost = cost;
        best_a = a;
        best_b = c;
      }
    }
  }
  return {Rational(best_a, n), Rational(best_b, n)};
}

std::int64_t default_example_kf(std::int64_t lambda_final, const Rational& ri_over_ki) {
  // rI = ri_over_ki * lambda * kF must be a positive integer.
  const Rational per_kf = ri_over_ki * Rational(lambda_final);
  const std::int64_t kf = per_kf.denominator();
  return kf >= 2 ? kf : 2;
}

std::vector<CurvePoint> curve(std::int64_t lambda_final, const Rational& ri_over_ki, std::size_t samples,
                              std::optional<std::int64_t> example_kf) {
  if (samples < 2) throw Error(Errc::invalid_argument, "curve needs at least 2 samples");
  if (ri_over_ki <= Rational(0)) throw Error(Errc::invalid_argument, "rI/kI must be positive");
  if (lambda_final < 2) throw Error(Errc::invalid_argument, "lambda must be at least 2");

  // rI/kF = lambda * rI/kI and, at sample s, rF/kF = s/samples. Ratios are
  // scale-invariant, so pick the smallest integer representatives.
  const Rational ri_over_kf = ri_over_ki * Rational(lambda_final);
  const std::int64_t n = static_cast<std::int64_t>(samples);
  const std::int64_t ex_kf = example_kf.value_or(default_example_kf(lambda_final, ri_over_ki));
  const Rational ex_ri = ri_over_kf * Rational(ex_kf);

  std::vector<CurvePoint> out;
  out.reserve(samples);
  for (std::int64_t s = 1; s <= n; ++s) {
    std::int64_t kf = n * ri_over_kf.denominator();
    std::int64_t rf = s * ri_over_kf.denominator();
    std::int64_t ri = n * ri_over_kf.numerator();
    const std::int64_t g = std::gcd(std::gcd(kf, rf), ri);
    kf /= g;
    rf /= g;
    ri /= g;
    const auto b = BoundInputs::make(lambda_final, kf, ri, rf);
    const Rational def = gamma_read_default(b);

    CurvePoint p;
    p.rf_over_ri = Rational(rf, ri);
    p.rel_default = def / def;
    p.rel_access_opt = gamma_read_access_optimal(b) / def;
    p.rel_bound = bound_combined(b) / def;
    const Rational ex_rf = Rational(s, n) * Rational(ex_kf);
    p.achievable = ex_ri.denominator() == 1 && ex_ri >= Rational(1) && ex_rf.denominator() == 1 && ex_rf >= Rational(1) &&
                   ex_rf < Rational(ex_kf);
    out.push_back(p);
  }
  return out;
}

}  // namespace splitconv
