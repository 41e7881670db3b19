#include "splitconv/gf256.hpp"

#include <ostream>
#include <sstream>

#include "splitconv/error.hpp"

namespace splitconv {

const char* reason_code(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "DOMAIN_ERROR";
    case Errc::dimension_mismatch: return "DIMENSION_MISMATCH";
    case Errc::singular_matrix: return "SINGULAR_MATRIX";
    case Errc::out_of_range: return "OUT_OF_RANGE";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
    case Errc::search_failure: return "SEARCH_FAILURE";
    case Errc::not_split_regime: return "NOT_SPLIT_REGIME";
    case Errc::no_savings_region: return "NO_SAVINGS_REGION";
    case Errc::bound_region: return "BOUND_REGION";
    case Errc::format: return "FORMAT_ERROR";
    case Errc::plan_violation: return "PLAN_VIOLATION";
    case Errc::invariant_violation: return "INVARIANT_VIOLATION";
  }
  return "UNKNOWN";
}

SingularMatrixError::SingularMatrixError(std::size_t column)
    : Error(Errc::singular_matrix,
            "singular matrix: no pivot in column " + std::to_string(column)),
      column_(column) {}

std::ostream& operator<<(std::ostream& os, Gf a) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  return os << "0x" << kHex[a.value() >> 4] << kHex[a.value() & 0xF];
}

namespace gf {

std::uint8_t mul_shift_reduce(std::uint8_t a, std::uint8_t b, std::uint16_t polynomial) {
  unsigned acc = 0;
  unsigned x = a;
  for (unsigned bits = b; bits != 0; bits >>= 1) {
    if (bits & 1U) acc ^= x;
    x <<= 1;
    if (x & 0x100U) x ^= polynomial;
  }
  return static_cast<std::uint8_t>(acc);
}

namespace {

int degree(unsigned p) {
  int d = -1;
  while (p != 0) {
    p >>= 1;
    ++d;
  }
  return d;
}

unsigned poly_mod(unsigned a, unsigned m) {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

}  // namespace

bool is_irreducible(std::uint16_t polynomial) {
  if (degree(polynomial) != 8) return false;
  // Any factorisation has a factor of degree <= 4.
  for (unsigned d = 2; d < 32; ++d) {
    if (poly_mod(polynomial, d) == 0) return false;
  }
  return true;
}

Tables build_tables(std::uint16_t polynomial) {
  if (!is_irreducible(polynomial)) {
    std::ostringstream msg;
    msg << "field polynomial 0x" << std::hex << polynomial << " is not an irreducible polynomial of degree 8";
    throw Error(Errc::domain, msg.str());
  }
  Tables t;
  t.polynomial = polynomial;
  for (unsigned g = 2; g < 256 && t.generator == 0; ++g) {
    unsigned x = 1;
    unsigned order = 0;
    do {
      x = mul_shift_reduce(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(g), polynomial);
      ++order;
    } while (x != 1);
    if (order == 255) t.generator = static_cast<std::uint8_t>(g);
  }
  std::uint8_t x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.exp[i + 255] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = mul_shift_reduce(x, t.generator, polynomial);
  }
  t.exp[510] = t.exp[0];
  t.exp[511] = t.exp[1];

  for (unsigned a = 1; a < 256; ++a) {
    for (unsigned b = 1; b < 256; ++b) {
      const auto via_tables = t.exp[t.log[a] + t.log[b]];
      if (via_tables != mul_shift_reduce(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), polynomial)) {
        throw Error(Errc::invariant_violation, "log/antilog tables disagree with shift-and-reduce product");
      }
    }
  }
  return t;
}

namespace detail {
Tables active = build_tables(kDefaultPolynomial);
}  // namespace detail

void configure(std::uint16_t polynomial) {
  if (polynomial == detail::active.polynomial) return;
  detail::active = build_tables(polynomial);
}

const Tables& tables() { return detail::active; }

std::uint16_t polynomial() { return detail::active.polynomial; }

}  // namespace gf

Gf gf_inv(Gf a) {
  if (a.is_zero()) throw Error(Errc::domain, "inverse of zero in GF(2^8)");
  const auto& t = gf::detail::active;
  return Gf(t.exp[255 - t.log[a.value()]]);
}

Gf gf_div(Gf a, Gf b) {
  if (b.is_zero()) throw Error(Errc::domain, "division by zero in GF(2^8)");
  if (a.is_zero()) return Gf{};
  const auto& t = gf::detail::active;
  return Gf(t.exp[t.log[a.value()] + 255 - t.log[b.value()]]);
}

Gf gf_pow(Gf a, long long e) {
  if (e == 0) return Gf(1);
  if (a.is_zero()) {
    if (e < 0) throw Error(Errc::domain, "zero raised to a negative power");
    return Gf{};
  }
  const auto& t = gf::detail::active;
  long long l = (static_cast<long long>(t.log[a.value()]) * (e % 255)) % 255;
  if (l < 0) l += 255;
  return Gf(t.exp[static_cast<std::size_t>(l)]);
}

}  // namespace splitconv
