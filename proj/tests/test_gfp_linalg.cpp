#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kakeya/gfp_matrix.hpp"
#include "oracles.hpp"

using namespace kakeya;

namespace {

std::vector<oracle::Vec> rows_of(const GFpMatrix& m) {
  std::vector<oracle::Vec> out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out.emplace_back(m.row(r).begin(), m.row(r).end());
  }
  return out;
}

GFpMatrix random_matrix(std::mt19937_64& rng, std::uint32_t p, std::size_t r,
                        std::size_t c, int zero_bias = 0) {
  std::uniform_int_distribution<std::int64_t> d(0, p - 1 + zero_bias);
  GFpMatrix m(p, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const auto v = d(rng);
      m.set(i, j, v >= p ? 0 : v);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("rank examples") {
  CHECK(rank(GFpMatrix::identity(5, 3)) == 3);
  CHECK(rank(GFpMatrix(7, 4, 5)) == 0);
  const GFpMatrix m =
      GFpMatrix::from_rows(2, {{1, 1, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 1}});
  CHECK(rank(m) == 3);
  CHECK(GFpMatrix::from_rows(5, {{-1, 7}}).at(0, 0) == 4);
  CHECK(GFpMatrix::from_rows(5, {{-1, 7}}).at(0, 1) == 2);
  CHECK_THROWS_AS(GFpMatrix(6, 1, 1), InvalidArgument);
}

TEST_CASE("rank agrees with an independent elimination") {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u}) {
    for (int t = 0; t < 40; ++t) {
      const GFpMatrix m = random_matrix(rng, p, 1 + rng() % 12, 1 + rng() % 12, t % 3 * 4);
      CHECK(rank(m) == oracle::rank(rows_of(m), p));
      CHECK(rank(m) == rank(m.transpose()));
    }
  }
}

TEST_CASE("packed GF(2) kernel matches the generic path") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 150, c = 1 + rng() % 200;
    const GFpMatrix m = random_matrix(rng, 2, r, c, t % 4);
    REQUIRE(detail::rank_gf2_packed(m) == detail::rank_generic(m));
    CHECK(rank(m) == detail::rank_generic(m));
  }
  // Word boundaries.
  for (std::size_t c : {63u, 64u, 65u, 127u, 128u, 129u}) {
    const GFpMatrix id = GFpMatrix::identity(2, c);
    CHECK(detail::rank_gf2_packed(id) == c);
  }
}

TEST_CASE("rank of a product is at most the ranks of the factors") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const GFpMatrix a = random_matrix(rng, 3, 1 + rng() % 6, 1 + rng() % 6, 2);
    const GFpMatrix b = random_matrix(rng, 3, a.cols(), 1 + rng() % 6, 2);
    CHECK(rank(a * b) <= std::min(rank(a), rank(b)));
  }
}

TEST_CASE("kron examples and layout") {
  const GFpMatrix a = GFpMatrix::from_rows(5, {{2}});
  const GFpMatrix b = GFpMatrix::from_rows(5, {{3}});
  CHECK(kron(a, b) == GFpMatrix::from_rows(5, {{1}}));
  CHECK(kron(GFpMatrix::identity(3, 2), GFpMatrix::identity(3, 3)) ==
        GFpMatrix::identity(3, 6));
  const GFpMatrix x = GFpMatrix::from_rows(7, {{1, 2}, {3, 4}});
  const GFpMatrix y = GFpMatrix::from_rows(7, {{0, 5, 6}});
  const GFpMatrix k = kron(x, y);
  REQUIRE(k.rows() == 2);
  REQUIRE(k.cols() == 6);
  for (std::size_t r1 = 0; r1 < 2; ++r1) {
    for (std::size_t c1 = 0; c1 < 2; ++c1) {
      for (std::size_t c2 = 0; c2 < 3; ++c2) {
        CHECK(k.at(r1, c1 * 3 + c2) == x.at(r1, c1) * y.at(0, c2) % 7);
      }
    }
  }
  CHECK_THROWS_AS(kron(GFpMatrix(2, 1, 1), GFpMatrix(3, 1, 1)), InvalidArgument);
}

TEST_CASE("mixed-product identity") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const GFpMatrix a1 = random_matrix(rng, 5, 2, 2), a2 = random_matrix(rng, 5, 2, 3);
    const GFpMatrix b1 = random_matrix(rng, 5, 2, 2), b2 = random_matrix(rng, 5, 3, 2);
    CHECK(kron(a1, a2) * kron(b1, b2) == kron(a1 * b1, a2 * b2));
  }
}

TEST_CASE("crank examples") {
  const GFpMatrix i2 = GFpMatrix::identity(3, 2);
  CHECK(crank(MatrixFamily({i2, i2})) == 2);
  CHECK(crank(MatrixFamily({GFpMatrix::from_rows(2, {{1, 0}}),
                            GFpMatrix::from_rows(2, {{0, 1}})})) == 2);
  CHECK_THROWS_AS(MatrixFamily({}), InvalidArgument);
  CHECK_THROWS_AS(MatrixFamily({GFpMatrix(2, 1, 2), GFpMatrix(2, 1, 3)}),
                  InvalidArgument);
}

TEST_CASE("crank does not grow under right multiplication") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const GFpMatrix h = random_matrix(rng, 3, 4, 5);
    std::vector<GFpMatrix> as, ah;
    for (int i = 0; i < 3; ++i) {
      as.push_back(random_matrix(rng, 3, 3, 4, 2));
      ah.push_back(as.back() * h);
    }
    CHECK(crank(MatrixFamily(as)) >= crank(MatrixFamily(ah)));
  }
}

TEST_CASE("crank of tensor families is at least r1 r2") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const std::size_t count = 1 + rng() % 3;
    std::vector<GFpMatrix> as, prods;
    std::size_t r2 = 1000;
    for (std::size_t i = 0; i < count; ++i) {
      as.push_back(random_matrix(rng, 3, 1 + rng() % 2, 3, 2));
      std::vector<GFpMatrix> bs;
      for (int j = 0; j < 2; ++j) {
        bs.push_back(random_matrix(rng, 3, 1 + rng() % 2, 3, 2));
        prods.push_back(kron(as.back(), bs.back()));
      }
      r2 = std::min(r2, oracle::rank(rows_of(vstack(bs)), 3));
    }
    const std::size_t r1 = oracle::rank(rows_of(vstack(as)), 3);
    CHECK(crank(MatrixFamily(prods)) >= r1 * r2);
  }
}

TEST_CASE("solve_row_factor") {
  const GFpMatrix b = GFpMatrix::from_rows(5, {{1, 2, 3}, {4, 0, 1}});
  CHECK(solve_row_factor(GFpMatrix::identity(5, 3), b) == b);

  const GFpMatrix a = GFpMatrix::from_rows(2, {{1, 1}, {0, 1}});
  CHECK(solve_row_factor(a, GFpMatrix::from_rows(2, {{1, 0}})) ==
        GFpMatrix::from_rows(2, {{1, 1}}));

  try {
    solve_row_factor(GFpMatrix::from_rows(2, {{1, 0}}), GFpMatrix::from_rows(2, {{0, 1}}));
    FAIL("expected NotFactorable");
  } catch (const NotFactorable& e) {
    CHECK(e.row() == 0);
    CHECK(std::string(e.what()).find("not factorable") != std::string::npos);
  }

  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const GFpMatrix aa = random_matrix(rng, 7, 4, 6, 3);
    const GFpMatrix cc = random_matrix(rng, 7, 3, 4);
    const GFpMatrix bb = cc * aa;
    CHECK(solve_row_factor(aa, bb) * aa == bb);
  }
}

TEST_CASE("tensor_family_rank_check") {
  const GFpMatrix v = GFpMatrix::identity(2, 2);
  const std::vector<GFpMatrix> fam{GFpMatrix::identity(2, 3), GFpMatrix::identity(2, 3)};
  const auto r = tensor_family_rank_check(v, fam);
  CHECK(r.span_dim == 6);
  CHECK(r.holds);

  const GFpMatrix v1 = GFpMatrix::from_rows(3, {{1, 2}});
  const std::vector<GFpMatrix> one{GFpMatrix::from_rows(3, {{1, 0, 0}, {0, 1, 0}})};
  CHECK(tensor_family_rank_check(v1, one).span_dim >= 2);

  const GFpMatrix dep = GFpMatrix::from_rows(3, {{1, 2}, {2, 1}});
  CHECK_THROWS_AS(tensor_family_rank_check(dep, fam), InvalidArgument);

  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    GFpMatrix vs = random_matrix(rng, 3, 2, 4);
    if (rank(vs) < 2) continue;
    std::vector<GFpMatrix> bs{random_matrix(rng, 3, 2, 3), random_matrix(rng, 3, 2, 3)};
    const auto res = tensor_family_rank_check(vs, bs);
    CHECK(res.holds);
    CHECK(res.span_dim >= 2 * res.k);
  }
}

TEST_CASE("row echelon and independent rows") {
  const GFpMatrix m = GFpMatrix::from_rows(3, {{0, 1, 2}, {0, 1, 1}, {1, 0, 0}});
  const Echelon e = row_echelon(m);
  CHECK(e.pivot_cols == std::vector<std::size_t>{0, 1, 2});
  CHECK(independent_rows(m) == std::vector<std::size_t>{0, 1, 2});
  // Second row is twice the first.
  const GFpMatrix m2 = GFpMatrix::from_rows(3, {{0, 1, 2}, {0, 2, 1}, {1, 0, 0}});
  CHECK(row_echelon(m2).pivot_cols == std::vector<std::size_t>{0, 1});
  CHECK(independent_rows(m2) == std::vector<std::size_t>{0, 2});
  const GFpMatrix d = GFpMatrix::from_rows(3, {{1, 1}, {2, 2}, {0, 1}});
  CHECK(independent_rows(d) == std::vector<std::size_t>{0, 2});
}
