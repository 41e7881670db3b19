#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "splitconv/combinations.hpp"
#include "splitconv/error.hpp"
#include "splitconv/gf256.hpp"
#include "splitconv/matrix.hpp"

using namespace splitconv;

namespace {

Gf g(unsigned v) { return Gf(static_cast<std::uint8_t>(v)); }

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = g(rng() & 0xFF);
  return m;
}

Matrix naive_mul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint8_t acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc ^= oracle::mul(a(i, k).value(), b(k, j).value());
      out(i, j) = g(acc);
    }
  return out;
}

// Largest r with a nonzero r x r minor.
std::size_t minor_rank(const Matrix& m) {
  const std::size_t top = std::min(m.rows(), m.cols());
  for (std::size_t r = top; r > 0; --r) {
    bool found = false;
    for_each_subset(m.rows(), r, [&](std::span<const std::size_t> rows) {
      for_each_subset(m.cols(), r, [&](std::span<const std::size_t> cols) {
        std::vector<std::vector<std::uint8_t>> sub(r, std::vector<std::uint8_t>(r));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) sub[i][j] = m(rows[i], cols[j]).value();
        found = oracle::det(sub) != 0;
        return !found;
      });
      return !found;
    });
    if (found) return r;
  }
  return 0;
}

struct RestoreField {
  ~RestoreField() { gf::configure(gf::kDefaultPolynomial); }
};

}  // namespace

TEST_CASE("addition is xor") {
  CHECK(gf_add(g(0x00), g(0x5A)) == g(0x5A));
  CHECK(gf_add(g(0x5A), g(0x5A)) == g(0x00));
  CHECK(gf_add(g(0x03), g(0x05)) == g(0x06));
  CHECK(gf_sub(g(0x03), g(0x05)) == g(0x06));
}

TEST_CASE("multiplication table matches shift-and-reduce oracle") {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) REQUIRE(gf_mul(g(a), g(b)).value() == oracle::mul(a, b));
}

TEST_CASE("multiplicative identity and absorbing zero") {
  for (unsigned x = 0; x < 256; ++x) {
    CHECK(gf_mul(g(1), g(x)) == g(x));
    CHECK(gf_mul(g(0), g(x)) == g(0));
  }
}

TEST_CASE("inverse matches brute-force search") {
  CHECK(gf_inv(g(1)) == g(1));
  for (unsigned a = 1; a < 256; ++a) {
    REQUIRE(gf_inv(g(a)).value() == oracle::inv(a));
    REQUIRE(gf_mul(g(a), gf_inv(g(a))) == g(1));
    REQUIRE(gf_div(g(1), g(a)) == gf_inv(g(a)));
  }
  CHECK_THROWS_AS(gf_inv(g(0)), Error);
  try {
    gf_inv(g(0));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain);
  }
  CHECK_THROWS_AS(gf_div(g(7), g(0)), Error);
}

TEST_CASE("powers") {
  for (unsigned a = 1; a < 256; ++a) {
    CHECK(gf_pow(g(a), 0) == g(1));
    CHECK(gf_pow(g(a), 255) == g(1));
    CHECK(gf_mul(gf_pow(g(a), 3), gf_pow(g(a), -3)) == g(1));
    CHECK(gf_pow(g(a), -3).value() == oracle::pow(oracle::inv(a), 3));
    CHECK(gf_pow(g(a), 7).value() == oracle::pow(a, 7));
    CHECK(gf_pow(g(a), 300) == gf_pow(g(a), 45));
    CHECK(gf_pow(g(a), -260) == gf_pow(g(a), -5));
  }
  CHECK(gf_pow(g(0), 0) == g(1));
  CHECK(gf_pow(g(0), 5) == g(0));
  CHECK_THROWS_AS(gf_pow(g(0), -1), Error);
}

TEST_CASE("nonzero elements form a cyclic group of order 255") {
  const auto gen = g(gf::tables().generator);
  std::vector<bool> seen(256, false);
  Gf x(1);
  for (int i = 0; i < 255; ++i) {
    REQUIRE_FALSE(seen[x.value()]);
    seen[x.value()] = true;
    x = x * gen;
  }
  CHECK(x == g(1));
  // Smallest primitive element: nothing below it has order 255.
  for (unsigned c = 2; c < gf::tables().generator; ++c) {
    Gf y = g(c);
    int order = 1;
    while (y != g(1)) {
      y = y * g(c);
      ++order;
    }
    CHECK(order < 255);
  }
}

TEST_CASE("field axioms hold exhaustively") {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) {
      const Gf ab = g(a) * g(b);
      REQUIRE(ab == g(b) * g(a));
      for (unsigned c = 0; c < 256; ++c) {
        if ((ab * g(c)) != (g(a) * (g(b) * g(c)))) FAIL("associativity " << a << " " << b << " " << c);
        if ((g(a) * (g(b) + g(c))) != (ab + g(a) * g(c))) FAIL("distributivity " << a << " " << b << " " << c);
      }
    }
}

TEST_CASE("alternative polynomial") {
  RestoreField restore;
  gf::configure(0x11B);
  CHECK(gf::polynomial() == 0x11B);
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) REQUIRE(gf_mul(g(a), g(b)).value() == oracle::mul(a, b, 0x11B));
  // x^8 + 1 = (x + 1)^8 and a degree-7 polynomial are both rejected.
  CHECK_THROWS_AS(gf::configure(0x101), Error);
  CHECK_THROWS_AS(gf::configure(0x8B), Error);
  CHECK(gf::polynomial() == 0x11B);
}

TEST_CASE("irreducibility test agrees with trial division") {
  // Brute force: p is irreducible iff no polynomial of degree 1..4 divides it.
  auto divides = [](unsigned d, unsigned p) {
    int dd = 31 - __builtin_clz(d);
    for (int deg = 8; deg >= dd; --deg)
      if (p & (1u << deg)) p ^= d << (deg - dd);
    return p == 0;
  };
  int count = 0;
  for (unsigned p = 0x100; p < 0x200; ++p) {
    bool irreducible = true;
    for (unsigned d = 2; d < 32 && irreducible; ++d)
      if (divides(d, p)) irreducible = false;
    CHECK(gf::is_irreducible(static_cast<std::uint16_t>(p)) == irreducible);
    count += irreducible;
  }
  CHECK(count == 30);  // number of monic irreducible octics over GF(2)
}

TEST_CASE("mat_mul") {
  std::mt19937_64 rng(1);
  const auto a = random_matrix(3, 3, rng);
  CHECK(mat_mul(a, Matrix::identity(3)) == a);
  CHECK(mat_mul(a, Matrix(3, 3)) == Matrix(3, 3));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_matrix(3, 3, rng);
    const auto y = random_matrix(3, 3, rng);
    CHECK(mat_mul(x, y) == naive_mul(x, y));
  }
  const auto r = random_matrix(2, 5, rng);
  const auto s = random_matrix(5, 4, rng);
  CHECK(mat_mul(r, s) == naive_mul(r, s));
  CHECK_THROWS_AS(mat_mul(r, r), Error);
}

TEST_CASE("solve_linear") {
  std::mt19937_64 rng(2);
  const auto b = random_matrix(4, 2, rng);
  CHECK(solve_linear(Matrix::identity(4), b) == b);

  int solved = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(5, 5, rng);
    if (rank(a) < 5) continue;
    const auto x = random_matrix(5, 3, rng);
    CHECK(solve_linear(a, mat_mul(a, x)) == x);
    ++solved;
  }
  CHECK(solved > 40);

  const auto dup = Matrix::from_rows({{1, 2}, {1, 2}});
  CHECK_THROWS_AS(solve_linear(dup, Matrix(2, 1)), SingularMatrixError);
  try {
    solve_linear(Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {0, 0, 1}}), Matrix(3, 1));
    FAIL("expected singular");
  } catch (const SingularMatrixError& e) {
    CHECK(e.code() == Errc::singular_matrix);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("rank") {
  CHECK(rank(Matrix::identity(5)) == 5);
  CHECK(rank(Matrix(3, 4)) == 0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_matrix(4, 6, rng);
    if (trial % 3 == 0) {
      // Force a dependency so lower ranks are exercised.
      for (std::size_t c = 0; c < 6; ++c) m(3, c) = m(0, c) + g(7) * m(1, c);
    }
    if (trial % 5 == 0) {
      for (std::size_t c = 0; c < 6; ++c) m(2, c) = g(0x1F) * m(1, c);
    }
    const auto r = rank(m);
    CHECK(r == minor_rank(m));
    CHECK(r <= 4);
    const auto other = random_matrix(6, 3, rng);
    CHECK(rank(mat_mul(m, other)) <= std::min(r, rank(other)));
  }
}

TEST_CASE("dot and axpy") {
  const std::vector<Gf> x{g(1), g(2), g(3)};
  std::vector<Gf> y{g(4), g(5), g(6)};
  CHECK(dot(x, y).value() == (oracle::mul(1, 4) ^ oracle::mul(2, 5) ^ oracle::mul(3, 6)));
  axpy(g(2), x, y);
  CHECK(y[0] == g(4 ^ 2));
  CHECK(y[1] == g(5 ^ 4));
  CHECK(y[2] == g(6 ^ 6));
}
