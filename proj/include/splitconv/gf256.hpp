#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>

namespace splitconv {

/// An element of GF(2^8). The byte is a polynomial over GF(2) reduced by the
/// active field polynomial (see gf::configure).
class Gf {
 public:
  constexpr Gf() = default;
  constexpr explicit Gf(std::uint8_t value) : value_(value) {}

  constexpr std::uint8_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr bool operator==(Gf, Gf) = default;
  friend constexpr auto operator<=>(Gf, Gf) = default;

 private:
  std::uint8_t value_ = 0;
};

std::ostream& operator<<(std::ostream& os, Gf a);

namespace gf {

inline constexpr std::uint16_t kDefaultPolynomial = 0x11D;

/// Log/antilog tables for one field polynomial. exp_ is doubled so that
/// exp_[log a + log b] needs no reduction.
struct Tables {
  std::uint16_t polynomial = 0;
  std::uint8_t generator = 0;
  std::array<std::uint8_t, 256> log{};
  std::array<std::uint8_t, 512> exp{};
};

/// Carry-less multiply then reduce; the bootstrap reference for the tables.
std::uint8_t mul_shift_reduce(std::uint8_t a, std::uint8_t b, std::uint16_t polynomial);

/// True iff polynomial has degree 8 and no factor of degree 1..4.
bool is_irreducible(std::uint16_t polynomial);

/// Builds tables for the given polynomial, using the smallest primitive element
/// as generator, and cross-checks every product against mul_shift_reduce.
/// Throws Error(domain) when the polynomial is not an irreducible octic.
Tables build_tables(std::uint16_t polynomial);

/// Switches the process-wide field. Not thread-safe; call before concurrent use.
void configure(std::uint16_t polynomial);

const Tables& tables();
std::uint16_t polynomial();

namespace detail {
extern Tables active;
}  // namespace detail

}  // namespace gf

constexpr Gf gf_add(Gf a, Gf b) { return Gf(static_cast<std::uint8_t>(a.value() ^ b.value())); }
constexpr Gf gf_sub(Gf a, Gf b) { return gf_add(a, b); }

inline Gf gf_mul(Gf a, Gf b) {
  if (a.is_zero() || b.is_zero()) return Gf{};
  const auto& t = gf::detail::active;
  return Gf(t.exp[t.log[a.value()] + t.log[b.value()]]);
}

/// Throws Error(domain) for a == 0.
Gf gf_inv(Gf a);

/// Throws Error(domain) for b == 0.
Gf gf_div(Gf a, Gf b);

/// a^e; negative exponents go through gf_inv. gf_pow(0, 0) == 1.
Gf gf_pow(Gf a, long long e);

constexpr Gf operator+(Gf a, Gf b) { return gf_add(a, b); }
constexpr Gf operator-(Gf a, Gf b) { return gf_add(a, b); }
inline Gf operator*(Gf a, Gf b) { return gf_mul(a, b); }
inline Gf operator/(Gf a, Gf b) { return gf_div(a, b); }
constexpr Gf& operator+=(Gf& a, Gf b) { return a = a + b; }
constexpr Gf& operator-=(Gf& a, Gf b) { return a = a - b; }
inline Gf& operator*=(Gf& a, Gf b) { return a = a * b; }

}  // namespace splitconv
