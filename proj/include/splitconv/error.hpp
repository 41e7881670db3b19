#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitconv {

enum class Errc {
  domain,
  dimension_mismatch,
  singular_matrix,
  out_of_range,
  invalid_argument,
  search_failure,
  not_split_regime,
  no_savings_region,
  bound_region,
  format,
  plan_violation,
  invariant_violation,
};

/// Machine-parseable reason code, e.g. "NOT_SPLIT_REGIME".
const char* reason_code(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by solve_linear; column() is the first column without a usable pivot.
class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(std::size_t column);

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace splitconv
