#include "kakeya/selftest.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <functional>
#include <random>
#include <set>

#include "kakeya/bounds.hpp"
#include "kakeya/cyclotomic.hpp"
#include "kakeya/gfp_matrix.hpp"
#include "kakeya/incidence.hpp"
#include "kakeya/kakeya_set.hpp"
#include "kakeya/polyspace.hpp"

namespace kakeya {

namespace {

struct Ctx {
  std::mt19937_64 rng;
  std::size_t cases = 0;
  std::string failure;

  void expect(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failure.empty()) failure = what;
  }
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
  }
};

GFpMatrix random_matrix(Ctx& c, std::uint32_t p, std::size_t r, std::size_t k) {
  GFpMatrix m(p, r, k);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k; ++j) m.set(i, j, static_cast<std::int64_t>(c.below(p)));
  }
  return m;
}

void ring_crt(Ctx& c) {
  for (std::uint64_t n_mod : {6, 10, 15, 30, 4, 9, 7}) {
    for (int n : {1, 2}) {
      const RingSpec spec = RingSpec::make(n_mod, n);
      for (int t = 0; t < 20; ++t) {
        const std::uint64_t idx = c.below(spec.num_points());
        const Coords x = index_point(idx, spec);
        c.expect(point_index(x, spec) == idx, "point index round trip");
        if (spec.is_square_free()) {
          for (Residue v : x) {
            c.expect(crt_combine(crt_split(v, spec), spec) == v,
                     "CRT round trip for " + spec.to_string());
          }
        }
      }
      std::set<Coords> reps;
      for (const auto& d : enumerate_directions(spec)) {
        reps.insert(d.rep);
        // Any unit multiple canonicalizes back to the same class.
        for (std::uint64_t u = 1; u < n_mod; ++u) {
          if (std::gcd(u, n_mod) != 1) continue;
          Coords y = d.rep;
          for (auto& v : y) v = v * u % n_mod;
          c.expect(canonical_direction(y, spec).rep == d.rep,
                   "unit multiple canonicalizes in " + spec.to_string());
        }
      }
      c.expect(reps.size() == count_directions(spec),
               "direction count for " + spec.to_string());
    }
  }
}

void linalg_packed(Ctx& c) {
  for (int t = 0; t < 200; ++t) {
    const GFpMatrix m = random_matrix(c, 2, 1 + c.below(70), 1 + c.below(140));
    c.expect(detail::rank_gf2_packed(m) == detail::rank_generic(m),
             "packed and generic GF(2) ranks differ");
    c.expect(rank(m) == rank(m.transpose()), "rank differs from transpose rank");
  }
}

void linalg_products(Ctx& c) {
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 5;
    const GFpMatrix a = random_matrix(c, p, 1 + c.below(6), 1 + c.below(6));
    const GFpMatrix b = random_matrix(c, p, a.cols(), 1 + c.below(6));
    c.expect(rank(a * b) <= std::min(rank(a), rank(b)), "rank(AB) <= min");
  }
  for (int t = 0; t < 100; ++t) {
    const GFpMatrix a1 = random_matrix(c, 3, 2, 2), a2 = random_matrix(c, 3, 2, 3);
    const GFpMatrix b1 = random_matrix(c, 3, 2, 2), b2 = random_matrix(c, 3, 3, 2);
    c.expect(kron(a1, a2) * kron(b1, b2) == kron(a1 * b1, a2 * b2),
             "mixed-product identity");
  }
  for (int t = 0; t < 100; ++t) {
    std::vector<GFpMatrix> as, ah;
    const GFpMatrix h = random_matrix(c, 3, 4, 5);
    for (int i = 0; i < 3; ++i) {
      as.push_back(random_matrix(c, 3, 3, 4));
      ah.push_back(as.back() * h);
    }
    c.expect(crank(MatrixFamily(as)) >= crank(MatrixFamily(ah)),
             "crank multiplication lemma");
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t count = 1 + c.below(3);
    std::vector<GFpMatrix> as, prods;
    std::size_t r2 = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < count; ++i) {
      as.push_back(random_matrix(c, 2, 1 + c.below(2), 4));
      std::vector<GFpMatrix> bs;
      for (std::size_t j = 0; j < 2; ++j) {
        bs.push_back(random_matrix(c, 2, 1 + c.below(2), 3));
        prods.push_back(kron(as.back(), bs.back()));
      }
      r2 = std::min(r2, crank(MatrixFamily(bs)));
    }
    const std::size_t r1 = crank(MatrixFamily(as));
    c.expect(crank(MatrixFamily(prods)) >= r1 * r2, "crank tensor lemma");
  }
}

void cyclotomic_transfer(Ctx& c) {
  const std::pair<std::uint64_t, unsigned> fields[] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}};
  for (int t = 0; t < 200; ++t) {
    const auto [p, k] = fields[t % 4];
    const CycloField field(p, k);
    const std::size_t r = 1 + c.below(6), cols = 1 + c.below(6);
    std::vector<std::vector<std::int64_t>> exps(r, std::vector<std::int64_t>(cols));
    for (auto& row : exps) {
      for (auto& e : row) {
        e = c.below(3) == 0 ? -1 : static_cast<std::int64_t>(c.below(field.order()));
      }
    }
    const RankTransfer rt =
        rank_transfer_check(CycloMatrix::from_gamma_exponents(field, exps));
    c.expect(rt.holds, "cyclo rank below pattern rank over F_" + std::to_string(p));
  }
}

GFpPoly random_poly(Ctx& c, std::uint32_t p, unsigned n, unsigned max_deg) {
  GFpPoly f(p, n);
  for (const auto& mono : monomials_up_to(n, max_deg)) {
    if (c.below(2)) f.add_term(mono, static_cast<std::int64_t>(c.below(p)));
  }
  return f;
}

void polyspace_hasse(Ctx& c) {
  const std::uint32_t primes[] = {2, 3, 5};
  for (int t = 0; t < 500; ++t) {
    const std::uint32_t p = primes[t % 3];
    const unsigned n = 1 + static_cast<unsigned>(c.below(3));
    const GFpPoly f = random_poly(c, p, n, 4);
    Coords x(n), z(n), xz(n);
    for (unsigned i = 0; i < n; ++i) {
      x[i] = c.below(p);
      z[i] = c.below(p);
      xz[i] = (x[i] + z[i]) % p;
    }
    std::uint64_t rhs = 0;
    for (const auto& j : monomials_up_to(n, 4)) {
      std::uint64_t zj = 1;
      for (unsigned i = 0; i < n; ++i) zj = zj * mod_pow(z[i], j.exponents[i], p) % p;
      rhs = (rhs + hasse_derivative(f, j).evaluate(x) * zj) % p;
    }
    c.expect(f.evaluate(xz) == rhs, "f(x+z) != sum of Hasse terms");
  }
}

void polyspace_sz(Ctx& c) {
  const auto monos = monomials_up_to(2, 2);
  const Coords u = {0, 1, 2};
  const std::uint64_t total = ipow(3, static_cast<unsigned>(monos.size()));
  for (std::uint64_t code = 1; code < total; ++code) {
    GFpPoly f(3, 2);
    std::uint64_t rest = code;
    for (const auto& mono : monos) {
      f.add_term(mono, static_cast<std::int64_t>(rest % 3));
      rest /= 3;
    }
    c.expect(sz_mult_check(f, u).holds, "Schwartz-Zippel bound exceeded");
  }
  GFpPoly xy(3, 2);
  xy.add_term({{1, 1}}, 1);
  const SzMultCheck sz = sz_mult_check(xy, u);
  c.expect(sz.sum == 6 && sz.bound == 6, "xy does not attain the bound");
}

void polyspace_decoding(Ctx& c) {
  const RingSpec spec = RingSpec::make(2, 2);
  EvalMapSpec full;
  full.p = 2;
  full.n = 2;
  for (std::uint64_t i = 0; i < 4; ++i) full.points.push_back(index_point(i, spec));
  full.m = 3;
  full.degree = 3;
  const GFpMatrix e = eval_matrix(full);
  std::vector<GFpMatrix> ds;
  for (const auto& d : enumerate_directions(spec)) {
    const GFpMatrix db = direction_eval_matrix(d.rep, 2, 2, 2);
    ds.push_back(db);
    for (std::uint64_t i = 0; i < 4; ++i) {
      const Line l = make_line(index_point(i, spec), d, spec);
      const GFpMatrix cm = decoding_matrix(l, spec, 2).matrix;
      for (std::int64_t code = 0; code < 16; ++code) {
        GFpMatrix f(2, 4, 1);
        for (std::size_t b = 0; b < 4; ++b) f.set(b, 0, (code >> b) & 1);
        c.expect(cm * (e * f) == db * f, "decoding identity fails on a cubic");
      }
    }
  }
  c.expect(crank(MatrixFamily(ds)) == dim_homog(2, 3), "crank{D_b} != delta");
}

void incidence_rank(Ctx& c) {
  for (std::uint32_t p : {2, 3, 5, 7}) {
    for (unsigned n : {2, 3}) {
      c.expect(rank_formula_check(p, n).holds,
               "rank formula for p=" + std::to_string(p) + ", n=" + std::to_string(n));
    }
  }
}

void incidence_lines(Ctx& c) {
  for (auto [p, n] : {std::pair{2, 2}, {3, 2}, {5, 2}, {2, 3}, {3, 3}}) {
    const RingSpec spec = RingSpec::make(p, n);
    for (const auto& d : enumerate_directions(spec)) {
      for (std::uint64_t i = 0; i < spec.num_points(); ++i) {
        const Line l = make_line(index_point(i, spec), d, spec);
        if (point_index(l.base, spec) != i) continue;
        c.expect(line_action_check(l, spec), "line action on " + spec.to_string());
      }
    }
  }
}

void kakeya_constructions(Ctx& c) {
  for (std::uint32_t p : {3, 5, 7, 11, 13}) {
    for (unsigned n : {2u, 3u}) {
      const KakeyaSet s = tangent_construction(p, n);
      c.expect(verify(s).valid, "tangent construction invalid");
      const double env = std::pow(p, n) / std::pow(2, n - 1) + 3 * std::pow(p, n - 1);
      c.expect(static_cast<double>(s.size()) <= env, "tangent size above envelope");
    }
  }
  const RingSpec s15 = RingSpec::make(15, 2);
  const std::vector<KakeyaSet> parts = {tangent_construction(3, 2),
                                        tangent_construction(5, 2)};
  const KakeyaSet prod = crt_product(parts, s15);
  c.expect(verify(prod).valid, "CRT product invalid");
  c.expect(prod.size() == parts[0].size() * parts[1].size(), "CRT product size");
  const KakeyaSet line6 = full_set(RingSpec::make(6, 1));
  const KakeyaSet sq = power_product(line6, 2);
  c.expect(verify(sq).valid && sq.size() == 36, "power of full (Z/6)^1");
  const std::vector<KakeyaSet> parts6 = {full_set(RingSpec::make(2, 2)),
                                         tangent_construction(3, 2)};
  const KakeyaSet p6 = crt_product(parts6, RingSpec::make(6, 2));
  const KakeyaSet p6sq = power_product(p6, 2);
  c.expect(verify(p6sq).valid, "power of CRT product invalid");
  c.expect(p6sq.size() == p6.size() * p6.size(), "|S^2| != |S|^2");
  for (const KakeyaSet* s : {&prod, &sq, &p6}) {
    const KakeyaSet back = kakeya_from_json(nlohmann::json::parse(to_json(*s).dump()));
    c.expect(verify(back).valid && back.points() == s->points(), "JSON round trip");
  }
}

void kakeya_rank_size(Ctx& c) {
  for (std::uint64_t n_mod : {2, 3, 4, 5, 6}) {
    for (int n : {1, 2}) {
      const RingSpec spec = RingSpec::make(n_mod, n);
      const KakeyaSet full = full_set(spec);
      for (int t = 0; t < 10; ++t) {
        const KakeyaSet s = trim(reassign_witnesses(full, c.rng));
        const std::size_t r = rank(line_matrix(s));
        c.expect(r <= s.size(), "rank(M_S) > |S| in " + spec.to_string());
        c.expect(r * n_mod >= s.size(), "rank(M_S) < |S'|/N in " + spec.to_string());
        const auto lines = greedy_independent_lines(s);
        GFpMatrix rows(static_cast<std::uint32_t>(spec.smallest_prime()),
                       lines.size(), spec.num_points());
        for (std::size_t i = 0; i < lines.size(); ++i) {
          for (auto x : line_indices(lines[i], spec)) rows.set(i, x, 1);
        }
        c.expect(rank(rows) == lines.size() && lines.size() * n_mod >= s.size(),
                 "greedy lines dependent or too few");
      }
    }
  }
}

void bounds_soundness(Ctx& c) {
  for (std::uint32_t p : {2, 3, 5}) {
    for (unsigned n : {2u, 3u}) {
      const KakeyaSet base = tangent_construction(p, n);
      for (int t = 0; t < 3; ++t) {
        const KakeyaSet s = t == 0 ? base : reassign_witnesses(base, c.rng);
        const BoundReport r = certify_prime(s);
        c.expect(r.passed(), "prime pipeline failed on " + s.spec().to_string());
        c.expect(r.certified >= binomial(p + n - 2, n - 1), "prime certificate too small");
      }
    }
  }
  for (std::uint64_t n_mod : {6, 10, 15}) {
    const RingSpec spec = RingSpec::make(n_mod, 2);
    std::vector<KakeyaSet> tangents;
    for (const auto& f : spec.factors()) {
      tangents.push_back(tangent_construction(static_cast<std::uint32_t>(f.prime), 2));
    }
    const KakeyaSet prod = crt_product(tangents, spec);
    const mpq_class bound = squarefree_bound(n_mod, 2);
    c.expect(mpq_class(mpz_class(prod.size())) >= bound, "construction below bound");
    const KakeyaSet s = reassign_witnesses(prod, c.rng);
    const BoundReport two = certify_two_primes(s);
    c.expect(two.passed() && two.certified <= s.size(), "two-prime pipeline");
    const BoundReport sf = certify_squarefree(s);
    c.expect(sf.passed() && sf.certified <= s.size(), "square-free pipeline");
  }
}

void bounds_prime_power(Ctx& c) {
  for (auto [q, n] : {std::pair{4, 1}, {4, 2}, {9, 1}, {8, 1}}) {
    const KakeyaSet full = full_set(RingSpec::make(q, n));
    const KakeyaSet s = reassign_witnesses(full, c.rng);
    const BoundReport r = certify_prime_power(s);
    c.expect(r.passed(), "prime-power pipeline failed on " + s.spec().to_string());
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ULL;
  return h;
}

struct Suite {
  const char* name;
  std::function<void(Ctx&)> run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"ring.crt_and_directions", ring_crt},
      {"gfp_linalg.packed_vs_generic", linalg_packed},
      {"gfp_linalg.products_and_crank", linalg_products},
      {"cyclotomic.rank_transfer", cyclotomic_transfer},
      {"polyspace.hasse_taylor", polyspace_hasse},
      {"polyspace.sz_multiplicity", polyspace_sz},
      {"polyspace.decoding", polyspace_decoding},
      {"incidence.rank_formula", incidence_rank},
      {"incidence.line_action", incidence_lines},
      {"kakeya.constructions", kakeya_constructions},
      {"kakeya.rank_size", kakeya_rank_size},
      {"bounds.soundness", bounds_soundness},
      {"bounds.prime_power", bounds_prime_power},
  };
  return all;
}

}  // namespace

std::vector<std::string> selftest_suites() {
  std::vector<std::string> out;
  for (const auto& s : suites()) out.emplace_back(s.name);
  return out;
}

std::vector<SuiteResult> run_selftest(std::string_view filter,
                                      std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& s : suites()) {
    if (std::string_view(s.name).find(filter) == std::string_view::npos) continue;
    // Each suite gets its own stream so filtering does not shift the others.
    Ctx ctx{std::mt19937_64(seed ^ fnv1a(s.name)), 0, {}};
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    r.name = s.name;
    try {
      s.run(ctx);
      r.passed = ctx.failure.empty();
      r.message = ctx.failure;
    } catch (const std::exception& e) {
      r.passed = false;
      r.message = std::string("exception: ") + e.what();
    }
    r.cases = ctx.cases;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kakeya
