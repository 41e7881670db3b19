#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "construction_oracle.hpp"
#include "oracles.hpp"
#include "splitconv/combinations.hpp"
#include "splitconv/convertible.hpp"
#include "splitconv/error.hpp"

using namespace splitconv;

namespace {

Gf g(unsigned v) { return Gf(static_cast<std::uint8_t>(v)); }

std::vector<std::uint8_t> bytes(const std::vector<Gf>& v) {
  std::vector<std::uint8_t> out;
  for (auto x : v) out.push_back(x.value());
  return out;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::domain;
}

// Full-rank check over every k-subset without the systematic shortcut.
bool mds_by_full_rank(const VectorCode& code) {
  return for_each_subset(code.n, code.k, [&](std::span<const std::size_t> symbols) {
    std::vector<std::size_t> cols;
    for (auto s : symbols)
      for (std::size_t l = 0; l < code.alpha; ++l) cols.push_back(code.column_index(s, l));
    return rank(code.generator.select_columns(cols)) == code.alpha * code.k;
  });
}

}  // namespace

TEST_CASE("derive_params") {
  const auto down = derive_params(11, 8, 6, 4);
  CHECK(down.lambda_final == 2);
  CHECK(down.r_initial == 3);
  CHECK(down.r_final == 2);
  CHECK(down.kind == ConversionCase::split_down);
  CHECK(down.alpha == 5);
  CHECK(down.beta1 == 2);
  CHECK(down.beta2 == 4);
  CHECK(case_name(down.kind) == "SPLIT_DOWN");

  const auto up = derive_params(9, 8, 6, 4);
  CHECK(up.lambda_final == 2);
  CHECK(up.r_initial == 1);
  CHECK(up.r_final == 2);
  CHECK(up.kind == ConversionCase::split_up);
  CHECK(up.alpha == 4);
  CHECK(up.beta1 == 3);
  CHECK(up.beta2 == 4);

  // rI = rF: both formulas give the same sizes.
  const auto eq = derive_params(10, 8, 6, 4);
  CHECK(eq.kind == ConversionCase::split_up);
  CHECK(eq.alpha == (eq.lambda_final - 1) * eq.r_final + eq.r_initial);
  CHECK(eq.beta1 == (eq.lambda_final - 1) * eq.r_final);

  CHECK(code_of([] { derive_params(11, 9, 6, 4); }) == Errc::not_split_regime);
  CHECK(code_of([] { derive_params(6, 4, 6, 4); }) == Errc::not_split_regime);
  CHECK(code_of([] { derive_params(10, 4, 7, 2); }) == Errc::no_savings_region);
  CHECK(code_of([] { derive_params(8, 8, 6, 4); }) == Errc::invalid_argument);

  for (const auto& s : oracle::sweep()) {
    const auto p = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    CHECK(p.beta1 <= p.alpha);
    CHECK(p.beta2 >= 1);
    CHECK(p.beta2 <= p.alpha);
  }
}

TEST_CASE("block coordinates") {
  const auto p = derive_params(11, 8, 6, 4);
  CHECK(block_coords(1, p) == BlockCoords{1, 1});
  CHECK(block_coords(2, p) == BlockCoords{1, 2});
  CHECK(block_coords(3, p) == BlockCoords{2, 1});
  CHECK(block_coords(4, p) == BlockCoords{2, 2});
  CHECK(block_coords(5, p) == BlockCoords{3, 1});
  CHECK_THROWS_AS(block_coords(0, p), Error);
  CHECK_THROWS_AS(block_coords(6, p), Error);

  const auto up = derive_params(9, 8, 6, 4);
  CHECK(block_coords(4, up) == BlockCoords{2, 2});
}

TEST_CASE("permuted instance") {
  const auto p = derive_params(11, 8, 6, 4);  // lambda 2, rF 2
  CHECK(permuted_instance(1, 2, p) == 3);
  CHECK(permuted_instance(3, 2, p) == 1);
  for (std::size_t l = 1; l <= 4; ++l) CHECK(permuted_instance(l, 1, p) == l);
  CHECK_THROWS_AS(permuted_instance(5, 1, p), Error);
  CHECK_THROWS_AS(permuted_instance(1, 3, p), Error);

  const auto q = derive_params(8, 6, 3, 2);  // lambda 3, rF 1
  CHECK(q.lambda_final == 3);
  CHECK(permuted_instance(2, 2, q) == 1);
  CHECK(permuted_instance(1, 2, q) == 3);
  CHECK(permuted_instance(1, 3, q) == 2);

  // Each codeword's permutation is a bijection on the first lambda blocks.
  for (const auto& s : oracle::sweep()) {
    const auto params = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto points = search_points(params.n_initial, params.k_initial, params.max_r());
    const auto o = oracle::Construction::from(params, points);
    for (std::size_t i = 1; i <= s.lambda; ++i) {
      std::vector<bool> hit(s.lambda * s.rf + 1, false);
      for (std::size_t l = 1; l <= s.lambda * s.rf; ++l) {
        const auto m = permuted_instance(l, i, params);
        CHECK(m == o.permute(l, i));
        REQUIRE(m >= 1);
        REQUIRE(m <= s.lambda * s.rf);
        CHECK_FALSE(hit[m]);
        hit[m] = true;
      }
    }
  }
}

TEST_CASE("projection vector") {
  const auto p = derive_params(11, 8, 6, 4);
  const EvaluationPoints ones({g(1), g(0x02), g(0x03)});

  const auto v = projection_vector(1, 1, 3, p, ones);
  std::size_t nonzero = 0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v[r].is_zero()) continue;
    ++nonzero;
    CHECK(v[r] == g(1));
    CHECK(r % p.alpha == 2);
    CHECK(r < p.alpha * p.k_final);
  }
  CHECK(nonzero == 4);

  // i = 2, kF = 2: entries xi^2, xi^3.
  const auto q = derive_params(7, 4, 3, 2);
  const EvaluationPoints two({g(0x02), g(0x05), g(0x07)});
  const auto w = projection_vector(2, 1, 1, q, two);
  CHECK(w[(2 - 1) * 2 * q.alpha + 0] == g(0x04));
  CHECK(w[(2 - 1) * 2 * q.alpha + q.alpha] == g(0x08));
  std::size_t count = 0;
  for (auto x : w) count += !x.is_zero();
  CHECK(count == 2);

  CHECK_THROWS_AS(projection_vector(3, 1, 1, p, ones), Error);
  CHECK_THROWS_AS(projection_vector(1, 4, 1, p, ones), Error);
  CHECK_THROWS_AS(projection_vector(1, 1, 6, p, ones), Error);
}

TEST_CASE("initial encoding vectors match the formula oracle") {
  const auto p = derive_params(11, 8, 6, 4);
  const auto points = construction_points(p);

  // t = 3 > rF, l = 1: permuted sum plus piggyback p^(1)_{1, 5}.
  std::vector<Gf> expected(p.alpha * p.k_initial);
  for (std::size_t i = 1; i <= 2; ++i) {
    const auto pv = projection_vector(i, 3, permuted_instance(1, i, p), p, points);
    for (std::size_t r = 0; r < expected.size(); ++r) expected[r] += pv[r];
  }
  const auto pig = projection_vector(1, 1, 5, p, points);
  for (std::size_t r = 0; r < expected.size(); ++r) expected[r] += pig[r];
  CHECK(initial_encoding_vector(3, 1, p, points) == expected);
  CHECK(piggyback_weight(3, 1, 1, points, p.k_final) == g(1));

  // Tail instance, t <= rF: plain unpermuted sum.
  std::vector<Gf> tail(p.alpha * p.k_initial);
  for (std::size_t i = 1; i <= 2; ++i) {
    const auto pv = projection_vector(i, 1, 5, p, points);
    for (std::size_t r = 0; r < tail.size(); ++r) tail[r] += pv[r];
  }
  CHECK(initial_encoding_vector(1, 5, p, points) == tail);

  // Split-up (9,8;6,4), t = 1, l = 2: sum plus piggyback p^(1)_{2,1}.
  const auto u = derive_params(9, 8, 6, 4);
  const auto upts = construction_points(u);
  std::vector<Gf> up(u.alpha * u.k_initial);
  for (std::size_t i = 1; i <= 2; ++i) {
    const auto pv = projection_vector(i, 1, permuted_instance(2, i, u), u, upts);
    for (std::size_t r = 0; r < up.size(); ++r) up[r] += pv[r];
  }
  const auto upig = projection_vector(1, 2, 1, u, upts);
  for (std::size_t r = 0; r < up.size(); ++r) up[r] += upig[r];
  CHECK(initial_encoding_vector(1, 2, u, upts) == up);

  for (const auto& s : oracle::sweep()) {
    const auto params = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto pts = construction_points(params);
    const auto o = oracle::Construction::from(params, pts);
    for (std::size_t t = 1; t <= s.ri; ++t)
      for (std::size_t l = 1; l <= params.alpha; ++l)
        REQUIRE(bytes(initial_encoding_vector(t, l, params, pts)) == o.initial(t, l));
  }
}

TEST_CASE("final encoding vectors match the formula oracle") {
  const auto p = derive_params(11, 8, 6, 4);
  const auto points = construction_points(p);
  // i = 1, t = 1, tail l = 5: p^(1)_{1,5} + p^(1)_{3,1}.
  auto expected = projection_vector(1, 1, 5, p, points);
  const auto extra = projection_vector(1, 3, 1, p, points);
  for (std::size_t r = 0; r < expected.size(); ++r) expected[r] += extra[r];
  CHECK(final_encoding_vector(1, 1, 5, p, points) == expected);

  for (const auto& s : oracle::sweep()) {
    const auto params = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto pts = construction_points(params);
    const auto o = oracle::Construction::from(params, pts);
    for (std::size_t i = 1; i <= s.lambda; ++i)
      for (std::size_t t = 1; t <= s.rf; ++t)
        for (std::size_t l = 1; l <= params.alpha; ++l) {
          const auto v = final_encoding_vector(i, t, l, params, pts);
          REQUIRE(bytes(v) == o.final_column(i, t, l));
          if (params.kind == ConversionCase::split_up) {
            std::size_t nz = 0;
            for (std::size_t r = 0; r < v.size(); ++r) {
              if (v[r].is_zero()) continue;
              ++nz;
              CHECK(r / (params.alpha * params.k_final) == i - 1);
            }
            CHECK(nz == params.k_final);
          }
        }
  }
}

TEST_CASE("final code is shared by every final codeword") {
  for (auto [ni, ki, nf, kf] : {std::array<std::size_t, 4>{11, 8, 6, 4}, std::array<std::size_t, 4>{9, 8, 6, 4}}) {
    const auto p = derive_params(ni, ki, nf, kf);
    const auto points = construction_points(p);
    const auto code = build_final_code(p, points);
    CHECK(code.is_systematic());
    const std::size_t dim = p.alpha * p.k_final;
    for (std::size_t i = 1; i <= p.lambda_final; ++i)
      for (std::size_t t = 1; t <= p.r_final; ++t)
        for (std::size_t l = 1; l <= p.alpha; ++l) {
          const auto v = final_encoding_vector(i, t, l, p, points);
          const auto col = code.encoding_vector(p.k_final + t - 1, l - 1);
          for (std::size_t r = 0; r < dim; ++r) CHECK(v[(i - 1) * dim + r] == col[r]);
        }
  }
}

TEST_CASE("the single-scale tail formula is not codeword independent") {
  // Scaling the extra-data term by xi_t instead of its own point makes
  // codeword 2's tail column differ from codeword 1's.
  const auto p = derive_params(11, 8, 6, 4);
  const auto points = construction_points(p);
  const auto o = oracle::Construction::from(p, points);
  const std::size_t dim = p.alpha * p.k_final;
  bool differs = false;
  for (std::size_t t = 1; t <= p.r_final; ++t) {
    const auto c1 = o.literal_tail_column(1, t, 5);
    const auto c2 = o.literal_tail_column(2, t, 5);
    for (std::size_t r = 0; r < dim; ++r) differs |= c1[r] != c2[dim + r];
    // The per-term scaling used by the library is codeword independent.
    const auto f1 = o.final_column(1, t, 5);
    const auto f2 = o.final_column(2, t, 5);
    for (std::size_t r = 0; r < dim; ++r) CHECK(f1[r] == f2[dim + r]);
  }
  CHECK(differs);
}

TEST_CASE("piggybacks respect sequential decoding") {
  for (const auto& s : oracle::sweep()) {
    const auto p = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto points = construction_points(p);
    const bool down = p.kind == ConversionCase::split_down;
    // Piggyback-free instances decode first.
    auto free_instance = [&](std::size_t l) {
      const auto bc = block_coords(l, p);
      return down ? bc.block > p.lambda_final : bc.offset <= p.r_initial;
    };
    for (std::size_t t = 1; t <= p.r_initial; ++t)
      for (std::size_t l = 1; l <= p.alpha; ++l) {
        auto rest = initial_encoding_vector(t, l, p, points);
        const bool tail = down && block_coords(l, p).block > p.lambda_final;
        for (std::size_t i = 1; i <= p.lambda_final; ++i) {
          const auto base = projection_vector(i, t, tail ? l : permuted_instance(l, i, p), p, points);
          for (std::size_t r = 0; r < rest.size(); ++r) rest[r] -= base[r];
        }
        for (std::size_t r = 0; r < rest.size(); ++r) {
          if (rest[r].is_zero()) continue;
          CHECK_FALSE(free_instance(l));
          CHECK(free_instance(r % p.alpha + 1));
        }
      }
    if (down) {
      // Extra data in tail columns of the final code comes from block 1.
      const auto code = build_final_code(p, points);
      for (std::size_t t = 1; t <= p.r_final; ++t)
        for (std::size_t l = p.lambda_final * p.r_final + 1; l <= p.alpha; ++l) {
          const auto col = code.encoding_vector(p.k_final + t - 1, l - 1);
          for (std::size_t r = 0; r < col.size(); ++r) {
            if (col[r].is_zero() || r % p.alpha + 1 == l) continue;
            CHECK(r % p.alpha + 1 == t);
          }
        }
    }
  }
}

TEST_CASE("piggyback-free instances are copies of the base code") {
  for (const auto& s : oracle::sweep()) {
    const auto p = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto points = construction_points(p);
    const auto code = build_initial_code(p, points);
    const bool down = p.kind == ConversionCase::split_down;
    for (std::size_t l = 1; l <= p.alpha; ++l) {
      const auto bc = block_coords(l, p);
      const bool tail = down && bc.block > p.lambda_final;
      if (!(tail || (!down && bc.offset <= p.r_initial))) continue;
      for (std::size_t t = 1; t <= p.r_initial; ++t) {
        const auto col = code.encoding_vector(p.k_initial + t - 1, l - 1);
        const auto h = parity_vector(t, p.k_initial, points);
        std::size_t nz = 0;
        for (std::size_t i = 1; i <= p.lambda_final; ++i)
          for (std::size_t j = 1; j <= p.k_final; ++j) {
            const std::size_t inst = tail ? l : permuted_instance(l, i, p);
            CHECK(col[(i - 1) * p.k_final * p.alpha + (j - 1) * p.alpha + inst - 1] == h[(i - 1) * p.k_final + j - 1]);
          }
        for (auto x : col) nz += !x.is_zero();
        CHECK(nz == p.k_initial);
      }
    }
    // Split-down parities t <= rF never carry piggybacks.
    if (down) {
      for (std::size_t t = 1; t <= p.r_final; ++t)
        for (std::size_t l = 1; l <= p.alpha; ++l) {
          std::size_t nz = 0;
          for (auto x : code.encoding_vector(p.k_initial + t - 1, l - 1)) nz += !x.is_zero();
          CHECK(nz == p.k_initial);
        }
    }
  }
}

TEST_CASE("final parities are rescaled base parities") {
  for (const auto& s : oracle::sweep()) {
    const auto p = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto points = construction_points(p);
    const auto code = build_final_code(p, points);
    for (std::size_t t = 1; t <= p.r_final; ++t) {
      const auto h = parity_vector(t, p.k_initial, points);
      for (std::size_t i = 1; i <= p.lambda_final; ++i) {
        const Gf scale = gf_pow(points.xi(t), -static_cast<long long>((i - 1) * p.k_final));
        for (std::size_t l = 1; l <= p.alpha; ++l) {
          const auto col = code.encoding_vector(p.k_final + t - 1, l - 1);
          for (std::size_t j = 1; j <= p.k_final; ++j)
            CHECK(col[(j - 1) * p.alpha + l - 1] == scale * h[(i - 1) * p.k_final + j - 1]);
        }
      }
    }
  }
}

TEST_CASE("codes for the two worked examples") {
  for (auto [ni, ki, nf, kf] : {std::array<std::size_t, 4>{11, 8, 6, 4}, std::array<std::size_t, 4>{9, 8, 6, 4}}) {
    const auto p = derive_params(ni, ki, nf, kf);
    const auto points = construction_points(p, true);
    const auto initial = build_initial_code(p, points);
    const auto final_code = build_final_code(p, points);
    CHECK(initial.is_systematic());
    CHECK(rank(initial.generator) == p.alpha * p.k_initial);
    CHECK(verify_mds_vector(initial));
    CHECK(verify_mds_vector(final_code));
    CHECK(mds_by_full_rank(final_code));
    CHECK(mds_by_full_rank(initial));
  }
}

TEST_CASE("MDS check catches a bad evaluation point set") {
  const auto p = derive_params(11, 8, 6, 4);
  const auto dup = EvaluationPoints::unchecked({g(1), g(2), g(2)});
  const auto initial = build_initial_code(p, dup);
  CHECK_FALSE(verify_mds_vector(initial));
  CHECK_FALSE(mds_by_full_rank(initial));
  const auto final_code = build_final_code(p, EvaluationPoints::unchecked({g(4), g(4), g(1)}));
  CHECK_FALSE(verify_mds_vector(final_code));
  CHECK_FALSE(mds_by_full_rank(final_code));
}

TEST_CASE("reduced MDS check agrees with full rank on the small sweep") {
  for (const auto& s : oracle::sweep()) {
    if (s.lambda * s.kf + s.ri > 9) continue;
    const auto p = derive_params(s.lambda * s.kf + s.ri, s.lambda * s.kf, s.kf + s.rf, s.kf);
    const auto points = construction_points(p, true);
    const auto final_code = build_final_code(p, points);
    CHECK(verify_mds_vector(final_code) == mds_by_full_rank(final_code));
    CHECK(verify_mds_vector(final_code));
  }
}
