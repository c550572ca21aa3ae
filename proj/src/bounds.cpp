#include "kakeya/bounds.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kakeya/cyclotomic.hpp"
#include "kakeya/incidence.hpp"
#include "kakeya/polyspace.hpp"

namespace kakeya {

mpq_class fq_bound(std::uint64_t q, unsigned n) {
  if (q < 2) throw InvalidArgument("fq_bound: q must be >= 2");
  // q / (2 - 1/q) = q^2 / (2q - 1)
  mpq_class per(mpz_class(q) * mpz_class(q), mpz_class(2 * q - 1));
  per.canonicalize();
  mpq_class out = 1;
  for (unsigned i = 0; i < n; ++i) out *= per;
  return out;
}

mpq_class squarefree_bound(std::uint64_t N, unsigned n) {
  const RingSpec spec = RingSpec::make(N, static_cast<int>(n));
  if (!spec.is_square_free()) {
    throw InvalidArgument("squarefree_bound: " + std::to_string(N) +
                          " is not square-free");
  }
  mpq_class out = 1;
  for (const auto& f : spec.factors()) out *= fq_bound(f.prime, n);
  return out;
}

bool BoundReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const LemmaCheck& c) { return c.passed; });
}

std::optional<std::uint64_t> BoundReport::quantity(
    const std::string& name) const {
  for (const auto& [k, v] : quantities) {
    if (k == name) return v;
  }
  return std::nullopt;
}

void BoundReport::record(const std::string& name, std::uint64_t value) {
  quantities.emplace_back(name, value);
}

void BoundReport::check(const std::string& name, bool ok, std::string detail) {
  checks.push_back({name, ok, std::move(detail)});
}

nlohmann::json json_count(std::uint64_t v) {
  if (v > (std::uint64_t{1} << 53)) return std::to_string(v);
  return v;
}

nlohmann::json json_rational(const mpq_class& q) {
  return {{"exact", q.get_str()}, {"value", q.get_d()}};
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["pipeline"] = r.pipeline;
  j["N"] = json_count(r.spec.modulus());
  j["n"] = r.spec.dim();
  j["set_size"] = json_count(r.set_size);
  j["closed_form_bound"] = json_rational(r.closed_form);
  j["certified_bound"] = json_count(r.certified);
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [k, v] : r.quantities) q[k] = json_count(v);
  j["quantities"] = std::move(q);
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["passed"] = r.passed();
  return j;
}

namespace {

void require_valid(const KakeyaSet& s, const std::string& pipeline) {
  const VerifyResult v = verify(s);
  if (!v.valid) {
    throw InvalidArgument(pipeline + ": input is not a valid Kakeya set (" +
                          std::to_string(v.missing.size()) + " missing, " +
                          std::to_string(v.uncontained.size()) +
                          " uncontained witnesses)");
  }
}

void check_cells(std::uint64_t rows, std::uint64_t cols, std::size_t guard,
                 const std::string& what) {
  if (cols != 0 && rows > guard / cols) {
    throw GuardExceeded(what + ": " + std::to_string(rows) + " x " +
                        std::to_string(cols) + " exceeds the cell cap of " +
                        std::to_string(guard));
  }
}

std::string ratio_text(std::uint64_t lhs, const char* op, std::uint64_t rhs) {
  return std::to_string(lhs) + " " + op + " " + std::to_string(rhs);
}

BoundReport base_report(const std::string& pipeline, const KakeyaSet& s) {
  BoundReport r;
  r.pipeline = pipeline;
  r.spec = s.spec();
  r.set_size = s.size();
  return r;
}

}  // namespace

BoundReport certify_prime(const KakeyaSet& s, std::size_t guard) {
  const RingSpec& spec = s.spec();
  if (spec.kind() != RingKind::kPrime) {
    throw InvalidArgument("prime pipeline needs a prime modulus, got " +
                          spec.to_string());
  }
  require_valid(s, "prime pipeline");
  const auto p = static_cast<std::uint32_t>(spec.modulus());
  const auto n = static_cast<unsigned>(spec.dim());
  BoundReport r = base_report("prime", s);
  r.closed_form = fq_bound(p, n);

  const GFpMatrix ms = line_matrix(s);
  const GFpMatrix w = build_W(p, n, guard);
  const GFpMatrix a = ms * w;
  const auto dirs = enumerate_directions(spec);
  for (std::size_t row = 0; row < dirs.size(); ++row) {
    const GFpMatrix expected = hyperplane(dirs[row].rep, spec).indicator(p, true);
    if (!std::equal(expected.row(0).begin(), expected.row(0).end(),
                    a.row(row).begin())) {
      throw AssertionFailure("prime pipeline: row for direction " +
                             coords_to_string(dirs[row].rep) +
                             " of M_S W is not the hyperplane complement");
    }
  }
  r.check("line_action_rows", true,
          std::to_string(dirs.size()) + " rows equal 1_{complement of H_b}");

  const std::size_t rank_ms = rank(ms);
  const std::size_t rank_a = rank(a);
  const std::uint64_t binom_bound = binomial(p + n - 2, n - 1);
  const KakeyaSet trimmed = trim(s);
  r.record("rank_M_S", rank_ms);
  r.record("rank_A", rank_a);
  r.record("binom_p_plus_n_minus_2_n_minus_1", binom_bound);
  r.record("trimmed_size", trimmed.size());
  r.certified = rank_a;
  r.check("rank_A_ge_binom", rank_a >= binom_bound,
          ratio_text(rank_a, ">=", binom_bound));
  r.check("rank_M_S_ge_rank_A", rank_ms >= rank_a,
          ratio_text(rank_ms, ">=", rank_a));
  r.check("size_ge_rank_M_S", s.size() >= rank_ms,
          ratio_text(s.size(), ">=", rank_ms));
  r.check("rank_M_S_times_N_ge_trimmed_size",
          rank_ms * p >= trimmed.size(),
          ratio_text(rank_ms * p, ">=", trimmed.size()));
  r.check("size_ge_certified", s.size() >= r.certified,
          ratio_text(s.size(), ">=", r.certified));
  return r;
}

BoundReport certify_two_primes(const KakeyaSet& s, std::size_t guard) {
  const RingSpec& spec = s.spec();
  if (spec.kind() != RingKind::kSquareFree || spec.factors().size() != 2) {
    throw InvalidArgument("two-prime pipeline needs N = pq, got " +
                          spec.to_string());
  }
  require_valid(s, "two-prime pipeline");
  const auto p = static_cast<std::uint32_t>(spec.factors()[0].prime);
  const std::uint64_t q = spec.factors()[1].prime;
  const auto n = static_cast<unsigned>(spec.dim());
  const RingSpec spec_p = spec.component(0);
  const RingSpec spec_q = spec.component(1);
  const std::uint64_t qn = spec_q.num_points();
  BoundReport r = base_report("two-primes", s);
  r.closed_form = squarefree_bound(spec.modulus(), n);

  check_cells(spec.num_points(), spec.num_points(), guard, "W_{p,n} (x) I");
  const GFpMatrix ms = line_matrix(s, p, ColumnOrder::kCrt);
  const GFpMatrix wi = kron(build_W(p, n, guard), GFpMatrix::identity(p, qn));
  const GFpMatrix prod = ms * wi;

  const auto dirs = enumerate_directions(spec);
  // Per component direction c of F_p^n: the F_q-lines paired with it.
  std::map<Coords, std::vector<std::vector<std::uint64_t>>> lines_by_c;
  for (std::size_t row = 0; row < dirs.size(); ++row) {
    const auto parts = line_split(*s.witness_for(dirs[row]), spec);
    const auto lq = line_indices(parts[1], spec_q);
    const GFpMatrix expected =
        kron(hyperplane(dirs[row].components[0], spec_p).indicator(p, true),
             GFpMatrix::indicator(p, qn, lq));
    if (!std::equal(expected.row(0).begin(), expected.row(0).end(),
                    prod.row(row).begin())) {
      throw AssertionFailure("two-prime pipeline: row for direction " +
                             coords_to_string(dirs[row].rep) +
                             " is not 1_{complement of H} (x) 1_{L_q}");
    }
    lines_by_c[dirs[row].components[0]].push_back(lq);
  }
  r.check("tensor_row_identity", true,
          std::to_string(dirs.size()) + " rows match");

  const std::size_t rank_prod = rank(prod);
  r.certified = rank_prod;
  r.record("rank_M_S", rank(ms));
  r.record("rank_product", rank_prod);

  // Lemma-level decomposition.
  std::vector<Coords> cs;
  std::vector<GFpMatrix> families;
  GFpMatrix v(p, lines_by_c.size(), spec_p.num_points());
  std::size_t min_rank_b = std::numeric_limits<std::size_t>::max();
  bool rank_size_ok = true;
  std::string rank_size_detail;
  for (const auto& [c, lines] : lines_by_c) {
    const GFpMatrix h = hyperplane(c, spec_p).indicator(p, true);
    std::copy(h.row(0).begin(), h.row(0).end(), v.row_mut(cs.size()).begin());
    cs.push_back(c);
    GFpMatrix b(p, lines.size(), qn);
    std::set<std::uint64_t> uni;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::uint64_t x : lines[i]) {
        b.set(i, x, 1);
        uni.insert(x);
      }
    }
    const std::size_t rb = rank(b);
    min_rank_b = std::min(min_rank_b, rb);
    if (rb * q < uni.size()) {
      rank_size_ok = false;
      rank_size_detail = "c = " + coords_to_string(c) + ": " +
                         ratio_text(rb * q, "<", uni.size());
    }
    families.push_back(std::move(b));
  }
  const auto indep = independent_rows(v);
  GFpMatrix vi(p, indep.size(), v.cols());
  std::vector<GFpMatrix> fi;
  for (std::size_t i = 0; i < indep.size(); ++i) {
    std::copy(v.row(indep[i]).begin(), v.row(indep[i]).end(),
              vi.row_mut(i).begin());
    fi.push_back(families[indep[i]]);
  }
  const TensorFamilyCheck tc = tensor_family_rank_check(vi, fi);
  const std::uint64_t binom_bound = binomial(p + n - 2, n - 1);
  r.record("dim_H_bar", indep.size());
  r.record("binom_p_plus_n_minus_2_n_minus_1", binom_bound);
  r.record("min_rank_B_c", min_rank_b);
  r.record("tensor_span_dim", tc.span_dim);
  r.check("dim_H_bar_ge_binom", indep.size() >= binom_bound,
          ratio_text(indep.size(), ">=", binom_bound));
  r.check("rank_size_per_c", rank_size_ok,
          rank_size_ok ? "rank(B_c) q >= |union of L_q(c,.)| for every c"
                       : rank_size_detail);
  r.check("tensor_lemma", tc.holds,
          ratio_text(tc.span_dim, ">=", tc.n * tc.k));
  r.check("rank_product_ge_tensor_span", rank_prod >= tc.span_dim,
          ratio_text(rank_prod, ">=", tc.span_dim));
  r.check("size_ge_certified", s.size() >= r.certified,
          ratio_text(s.size(), ">=", r.certified));
  return r;
}

BoundReport certify_squarefree(const KakeyaSet& s,
                               const SquarefreeOptions& opts) {
  const RingSpec& spec = s.spec();
  if (!spec.is_square_free()) {
    throw InvalidArgument("square-free pipeline needs square-free N, got " +
                          spec.to_string());
  }
  if (spec.kind() == RingKind::kPrime) {
    BoundReport r = certify_prime(s, opts.guard);
    r.pipeline = "squarefree/prime";
    return r;
  }
  require_valid(s, "square-free pipeline");
  const auto n = static_cast<unsigned>(spec.dim());
  const auto factors = spec.factors();
  const std::uint64_t p1_raw = opts.p1.value_or(spec.smallest_prime());
  std::size_t i1 = factors.size();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].prime == p1_raw) i1 = i;
  }
  if (i1 == factors.size()) {
    throw InvalidArgument("p1 = " + std::to_string(p1_raw) +
                          " is not a prime factor of " +
                          std::to_string(spec.modulus()));
  }
  const auto p1 = static_cast<std::uint32_t>(p1_raw);
  const unsigned k = opts.k.value_or(p1);
  if (k == 0 || k % p1 != 0) {
    throw InvalidArgument("p1 = " + std::to_string(p1) + " must divide k = " +
                          std::to_string(k));
  }
  const unsigned m = opts.m.value_or(2 * k - k / p1);
  const std::uint64_t n0_mod = spec.modulus() / p1;
  const RingSpec spec1 = RingSpec::make(p1, static_cast<int>(n));
  const RingSpec spec0 = RingSpec::make(n0_mod, static_cast<int>(n));
  const std::uint64_t cols0 = spec0.num_points();
  const std::uint64_t dm = dim_leq(n, m - 1);
  const std::uint64_t delta = dim_homog(n, k * p1 - 1);
  const std::uint64_t rows_c = dim_leq(n, k - 1);

  BoundReport r = base_report("squarefree", s);
  r.closed_form = squarefree_bound(spec.modulus(), n);
  r.record("p1", p1);
  r.record("N0", n0_mod);
  r.record("k", k);
  r.record("m", m);
  r.record("binom_m_plus_n_minus_1_n", dm);
  r.record("delta_n_kp1_minus_1", delta);

  const auto dirs = enumerate_directions(spec);
  check_cells(dirs.size() * rows_c, spec1.num_points() * dm * cols0,
              opts.guard, "stacked decoding family");

  std::map<std::pair<Coords, Coords>, GFpMatrix> decoding_cache;
  std::map<Coords, GFpMatrix> d_cache;
  std::vector<GFpMatrix> c_members, d_members;
  std::map<Coords, std::vector<std::vector<std::uint64_t>>> l0_by_c;
  for (const auto& d : dirs) {
    const auto parts = line_split(*s.witness_for(d), spec);
    const Line& l1 = parts[i1];
    std::vector<Line> rest;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i != i1) rest.push_back(parts[i]);
    }
    const Line l0 = line_combine(rest, spec0);
    const auto l0_idx = line_indices(l0, spec0);
    const GFpMatrix ind0 = GFpMatrix::indicator(p1, cols0, l0_idx);

    auto key = std::make_pair(l1.base, l1.dir.rep);
    auto it = decoding_cache.find(key);
    if (it == decoding_cache.end()) {
      it = decoding_cache
               .emplace(key, decoding_matrix(l1, spec1, k, m).matrix)
               .first;
    }
    auto dit = d_cache.find(l1.dir.rep);
    if (dit == d_cache.end()) {
      dit = d_cache
                .emplace(l1.dir.rep,
                         direction_eval_matrix(l1.dir.rep, p1, n, k))
                .first;
    }
    c_members.push_back(kron(it->second, ind0));
    d_members.push_back(kron(dit->second, ind0));
    l0_by_c[l1.dir.rep].push_back(l0_idx);
  }

  const MatrixFamily c_family(c_members);
  const std::size_t crank_c = crank(c_family);
  r.record("crank", crank_c);
  r.certified = (crank_c + dm - 1) / dm;

  // (C (x) 1_{L_0})(E (x) I) = D_{b_1} (x) 1_{L_0}.
  EvalMapSpec e_spec;
  e_spec.p = p1;
  e_spec.n = n;
  for (std::uint64_t i = 0; i < spec1.num_points(); ++i) {
    e_spec.points.push_back(index_point(i, spec1));
  }
  e_spec.m = m;
  e_spec.domain = DegreeDomain::kHomogeneous;
  e_spec.degree = k * p1 - 1;
  const GFpMatrix e = eval_matrix(e_spec);
  check_cells(e.rows() * cols0, e.cols() * cols0, opts.guard, "E (x) I");
  const GFpMatrix ei = kron(e, GFpMatrix::identity(p1, cols0));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (!(c_members[i] * ei == d_members[i])) {
      throw AssertionFailure("square-free pipeline: (C (x) 1)(E (x) I) differs "
                             "from D (x) 1 for direction " +
                             coords_to_string(dirs[i].rep));
    }
  }
  r.check("decoding_times_E_is_D", true,
          std::to_string(dirs.size()) + " members match");

  std::vector<GFpMatrix> ds;
  for (const auto& d1 : enumerate_directions(spec1)) {
    ds.push_back(direction_eval_matrix(d1.rep, p1, n, k));
  }
  const std::size_t crank_d = crank(MatrixFamily(ds));
  r.record("crank_D", crank_d);
  r.check("crank_D_ge_delta", crank_d >= delta,
          ratio_text(crank_d, ">=", delta));

  std::size_t min_l0 = std::numeric_limits<std::size_t>::max();
  bool l0_ok = true;
  std::string l0_detail;
  for (const auto& [c, lines] : l0_by_c) {
    GFpMatrix b(p1, lines.size(), cols0);
    std::set<std::uint64_t> uni;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::uint64_t x : lines[i]) {
        b.set(i, x, 1);
        uni.insert(x);
      }
    }
    const std::size_t rb = rank(b);
    min_l0 = std::min(min_l0, rb);
    if (rb * n0_mod < uni.size()) {
      l0_ok = false;
      l0_detail = "c = " + coords_to_string(c) + ": " +
                  ratio_text(rb * n0_mod, "<", uni.size());
    }
  }
  r.record("min_crank_L0", min_l0);
  r.check("crank_L0_ge_union_over_N0", l0_ok,
          l0_ok ? "crank{1_{L_0(c,.)}} N0 >= |union| for every c" : l0_detail);

  const std::size_t crank_dl = crank(MatrixFamily(d_members));
  r.record("crank_D_tensor_L0", crank_dl);
  r.check("crank_tensor_lemma", crank_dl >= crank_d * min_l0,
          ratio_text(crank_dl, ">=", crank_d * min_l0));
  r.check("crank_multiplication_lemma", crank_c >= crank_dl,
          ratio_text(crank_c, ">=", crank_dl));

  const KakeyaSet trimmed = trim(s);
  r.record("trimmed_size", trimmed.size());
  r.check("crank_size_relation", trimmed.size() * dm >= crank_c,
          ratio_text(trimmed.size() * dm, ">=", crank_c));

  // |S| C(m+n-1,n) >= delta * (Kakeya bound in R_0^n) / N0.
  const mpq_class lhs(mpz_class(s.size()) * mpz_class(dm));
  mpq_class rhs = mpq_class(mpz_class(delta)) *
                  squarefree_bound(n0_mod, n) / mpq_class(mpz_class(n0_mod));
  rhs.canonicalize();
  r.check("final_size_bound", lhs >= rhs,
          lhs.get_str() + " >= " + rhs.get_str());
  r.check("size_ge_certified", s.size() >= r.certified,
          ratio_text(s.size(), ">=", r.certified));
  return r;
}

BoundReport certify_prime_power(const KakeyaSet& s, std::size_t guard) {
  const RingSpec& spec = s.spec();
  if (!spec.is_prime_power()) {
    throw InvalidArgument("prime-power pipeline needs N = p^k, got " +
                          spec.to_string());
  }
  require_valid(s, "prime-power pipeline");
  const auto p = static_cast<std::uint32_t>(spec.factors()[0].prime);
  const unsigned e = spec.factors()[0].exponent;
  const auto n = static_cast<unsigned>(spec.dim());
  const std::uint64_t order = spec.modulus();
  BoundReport r = base_report("prime-power", s);
  // No closed form for k >= 2; the field bound is reported for reference.
  r.closed_form = fq_bound(order, n);

  const CycloField field(p, e);
  const GFpMatrix ms = line_matrix(s, p);
  const CycloMatrix f = dft_matrix(spec, guard);
  CycloMatrix m = CycloMatrix::from_integers(field, ms) * f;
  const mpq_class scale(mpz_class(1), mpz_class(order));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= scale;
  }

  // Row for b with line {a + t b}: gamma^{<a,y>} where <b,y> = 0, else 0.
  const auto dirs = enumerate_directions(spec);
  std::vector<Coords> pts;
  for (std::uint64_t i = 0; i < spec.num_points(); ++i) {
    pts.push_back(index_point(i, spec));
  }
  for (std::size_t row = 0; row < dirs.size(); ++row) {
    const Line* w = s.witness_for(dirs[row]);
    for (std::size_t y = 0; y < pts.size(); ++y) {
      const bool on = inner_product(dirs[row].rep, pts[y], order) == 0;
      const CycloElement want =
          on ? CycloElement::gamma_power(
                   field, static_cast<std::int64_t>(
                              inner_product(w->base, pts[y], order)))
             : CycloElement(field);
      if (!(m.at(row, y) == want)) {
        throw AssertionFailure("prime-power pipeline: entry (" +
                               coords_to_string(dirs[row].rep) + ", " +
                               coords_to_string(pts[y]) +
                               ") of p^{-k} M_S F is not the expected root");
      }
    }
  }
  r.check("dft_row_formula", true,
          std::to_string(dirs.size()) + " rows match");

  const GFpMatrix pattern = zero_pattern(m);
  const GFpMatrix w = build_W_pk(p, e, n, guard);
  for (std::size_t row = 0; row < dirs.size(); ++row) {
    const auto wr = w.row(point_index(dirs[row].rep, spec));
    if (!std::equal(wr.begin(), wr.end(), pattern.row(row).begin())) {
      throw AssertionFailure("prime-power pipeline: zero pattern row " +
                             coords_to_string(dirs[row].rep) +
                             " differs from the W row");
    }
  }
  r.check("pattern_rows_are_W_rows", true,
          "pattern row b equals W row at b");

  const std::size_t rank_q = rational_rank(ms);
  const std::size_t rank_c = cyclo_rank(m);
  const std::size_t rank_pat = rank(pattern);
  const std::size_t rank_w = rank(w);
  r.record("rank_Q_M_S", rank_q);
  r.record("cyclo_rank_M", rank_c);
  r.record("rank_Fp_pattern", rank_pat);
  r.record("rank_Fp_W", rank_w);
  r.certified = rank_w;
  r.check("size_ge_rank_Q_M_S", s.size() >= rank_q,
          ratio_text(s.size(), ">=", rank_q));
  r.check("rank_Q_M_S_ge_cyclo_rank", rank_q >= rank_c,
          ratio_text(rank_q, ">=", rank_c));
  r.check("rank_transfer", rank_c >= rank_pat,
          ratio_text(rank_c, ">=", rank_pat));
  r.check("size_ge_rank_W", s.size() >= rank_w,
          ratio_text(s.size(), ">=", rank_w));
  return r;
}

}  // namespace kakeya
