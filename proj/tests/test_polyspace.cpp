#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kakeya/polyspace.hpp"
#include "oracles.hpp"

using namespace kakeya;

namespace {

GFpPoly poly(std::uint32_t p, unsigned n,
             std::initializer_list<std::pair<std::vector<std::uint32_t>, int>> terms) {
  GFpPoly f(p, n);
  for (const auto& [e, c] : terms) f.add_term({e}, c);
  return f;
}

std::vector<oracle::Vec> rows_of(const GFpMatrix& m) {
  std::vector<oracle::Vec> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return out;
}

}  // namespace

TEST_CASE("dimension formulas") {
  CHECK(dim_homog(2, 3) == 4);
  CHECK(dim_leq(2, 2) == 6);
  for (unsigned d = 0; d < 10; ++d) CHECK(dim_homog(1, d) == 1);
  for (unsigned n = 1; n <= 4; ++n) {
    for (unsigned d = 0; d <= 6; ++d) {
      CHECK(monomials_of_weight(n, d).size() == dim_homog(n, d));
      CHECK(monomials_up_to(n, d).size() == dim_leq(n, d));
      CHECK(dim_homog(n, d) == oracle::binomial(n + d - 1, n - 1));
    }
  }
}

TEST_CASE("monomial order is weight then descending lex") {
  const auto m = monomials_up_to(2, 2);
  const std::vector<std::vector<std::uint32_t>> want = {
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  REQUIRE(m.size() == want.size());
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i].exponents == want[i]);
}

TEST_CASE("Lucas binomials agree with integer binomials") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (unsigned a = 0; a <= 40; ++a) {
      for (unsigned i = 0; i <= a; ++i) {
        REQUIRE(binom_mod_p(a, i, p) == oracle::binomial(a, i) % p);
      }
    }
  }
}

TEST_CASE("Hasse derivative examples") {
  const GFpPoly xy2 = poly(2, 2, {{{1, 1}, 1}});
  CHECK(hasse_derivative(xy2, {{1, 0}}) == poly(2, 2, {{{0, 1}, 1}}));
  const GFpPoly x3 = poly(3, 1, {{{3}, 1}});
  CHECK(hasse_derivative(x3, {{1}}).is_zero());
  CHECK(hasse_derivative(x3, {{3}}) == poly(3, 1, {{{0}, 1}}));
}

TEST_CASE("Hasse identity f(x+z) = sum f^(j)(x) z^j") {
  std::mt19937_64 rng(13);
  const std::uint32_t primes[] = {2, 3, 5};
  for (int t = 0; t < 500; ++t) {
    const std::uint32_t p = primes[t % 3];
    const unsigned n = 1 + rng() % 3;
    GFpPoly f(p, n);
    for (const auto& mono : monomials_up_to(n, 4)) {
      if (rng() % 2) f.add_term(mono, static_cast<std::int64_t>(rng() % p));
    }
    Coords x(n), z(n), xz(n);
    for (unsigned i = 0; i < n; ++i) {
      x[i] = rng() % p;
      z[i] = rng() % p;
      xz[i] = (x[i] + z[i]) % p;
    }
    std::int64_t rhs = 0;
    for (const auto& j : monomials_up_to(n, 4)) {
      std::int64_t zj = 1;
      for (unsigned i = 0; i < n; ++i) {
        for (unsigned e = 0; e < j.exponents[i]; ++e) zj = zj * static_cast<std::int64_t>(z[i]) % p;
      }
      rhs = (rhs + hasse_derivative(f, j).evaluate(x) * zj) % p;
    }
    REQUIRE(f.evaluate(xz) == rhs);
  }
}

TEST_CASE("multiplicity examples") {
  const GFpPoly x2y = poly(3, 2, {{{2, 1}, 1}});
  CHECK(multiplicity(x2y, Coords{0, 0}) == 3);
  const GFpPoly xy = poly(3, 2, {{{1, 1}, 1}});
  CHECK(multiplicity(xy, Coords{0, 1}) == 1);
  CHECK(multiplicity(xy, Coords{1, 1}) == 0);
  CHECK(multiplicity(GFpPoly(3, 2), Coords{0, 0}) == kInfiniteMultiplicity);
}

TEST_CASE("Schwartz-Zippel with multiplicities") {
  const Coords f3 = {0, 1, 2};
  const SzMultCheck xy = sz_mult_check(poly(3, 2, {{{1, 1}, 1}}), f3);
  CHECK(xy.sum == 6);
  CHECK(xy.bound == 6);
  CHECK(xy.holds);
  const SzMultCheck x5 = sz_mult_check(poly(5, 2, {{{1, 0}, 1}}), Coords{0, 1, 2, 3, 4});
  CHECK(x5.sum == 5);
  CHECK(x5.bound == 5);
  CHECK_THROWS_AS(sz_mult_check(GFpPoly(3, 2), f3), InvalidArgument);

  const auto monos = monomials_up_to(2, 2);
  std::size_t count = 0;
  for (int code = 1; code < 729; ++code) {
    GFpPoly f(3, 2);
    int rest = code;
    for (const auto& m : monos) {
      f.add_term(m, rest % 3);
      rest /= 3;
    }
    ++count;
    REQUIRE(sz_mult_check(f, f3).holds);
  }
  CHECK(count == 728);
}

TEST_CASE("evaluation matrices") {
  EvalMapSpec s;
  s.p = 3;
  s.n = 2;
  s.points = {{0, 0}};
  s.m = 1;
  s.domain = DegreeDomain::kAtMost;
  s.degree = 0;
  CHECK(eval_matrix(s) == GFpMatrix::from_rows(3, {{1}}));

  EvalMapSpec lin;
  lin.p = 2;
  lin.n = 2;
  lin.points = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  lin.m = 1;
  lin.degree = 1;
  CHECK(eval_matrix(lin) == GFpMatrix::from_rows(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}));

  // Row count: |A| times the number of derivative indices of weight < m.
  lin.m = 3;
  CHECK(eval_matrix(lin).rows() == 4 * dim_leq(2, 2));
}

TEST_CASE("stacked direction evaluations are injective on forms of degree kp-1") {
  const RingSpec s = RingSpec::make(2, 2);
  std::vector<GFpMatrix> ds;
  for (const auto& d : enumerate_directions(s)) ds.push_back(direction_eval_matrix(d.rep, 2, 2, 2));
  CHECK(crank(MatrixFamily(ds)) == 4);
  CHECK(oracle::rank(rows_of(vstack(ds)), 2) == 4);
}

TEST_CASE("decoding matrices over F_2^2 with k = 2") {
  const RingSpec s = RingSpec::make(2, 2);
  EvalMapSpec full;
  full.p = 2;
  full.n = 2;
  for (std::uint64_t i = 0; i < 4; ++i) full.points.push_back(index_point(i, s));
  full.m = 3;
  full.degree = 3;
  const GFpMatrix e = eval_matrix(full);
  for (const auto& d : enumerate_directions(s)) {
    const GFpMatrix db = direction_eval_matrix(d.rep, 2, 2, 2);
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Line l = make_line(index_point(a, s), d, s);
      const DecodingMatrix dec = decoding_matrix(l, s, 2);
      CHECK(dec.m == 3);
      REQUIRE(dec.matrix.rows() == 3);
      REQUIRE(dec.matrix.cols() == 24);
      // Columns of points off the line vanish.
      const auto on = line_indices(l, s);
      for (std::uint64_t x = 0; x < 4; ++x) {
        if (std::find(on.begin(), on.end(), x) != on.end()) continue;
        for (std::size_t j = 0; j < 6; ++j) {
          for (std::size_t r = 0; r < 3; ++r) CHECK(dec.matrix.at(r, x * 6 + j) == 0);
        }
      }
      for (int code = 0; code < 16; ++code) {
        GFpMatrix f(2, 4, 1);
        for (int b = 0; b < 4; ++b) f.set(static_cast<std::size_t>(b), 0, (code >> b) & 1);
        CHECK(dec.matrix * (e * f) == db * f);
      }
    }
  }
  CHECK_THROWS_AS(decoding_matrix(make_line(Coords{0, 0}, Coords{1, 0}, s), s, 3),
                  InvalidArgument);
}

TEST_CASE("decoding over F_3^2 with k = 3") {
  const RingSpec s = RingSpec::make(3, 2);
  for (const auto& d : enumerate_directions(s)) {
    const DecodingMatrix dec = decoding_matrix(make_line(Coords{0, 0}, d, s), s, 3);
    CHECK(dec.m == 5);
    CHECK(dec.matrix.rows() == dim_leq(2, 2));
    CHECK(dec.matrix.cols() == 9 * dim_leq(2, 4));
  }
}

TEST_CASE("too small m is reported as not factorable") {
  const RingSpec s = RingSpec::make(2, 2);
  const Line l = make_line(Coords{0, 0}, Coords{1, 1}, s);
  CHECK_THROWS_AS(decoding_matrix(l, s, 2, 1u), NotFactorable);
}
