#include "kakeya/polyspace.hpp"

#include <numeric>
#include <string>

namespace kakeya {

std::uint32_t MonomialIndex::weight() const {
  return std::accumulate(exponents.begin(), exponents.end(), std::uint32_t{0});
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw InvalidArgument("binomial overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t dim_homog(unsigned n, unsigned d) {
  if (n < 1) throw InvalidArgument("dim_homog: n must be >= 1");
  return binomial(n + d - 1, n - 1);
}

std::uint64_t dim_leq(unsigned n, unsigned d) {
  if (n < 1) throw InvalidArgument("dim_leq: n must be >= 1");
  return binomial(n + d, n);
}

std::uint32_t binom_mod_p(std::uint64_t a, std::uint64_t i, std::uint32_t p) {
  std::uint64_t r = 1;
  while (a > 0 || i > 0) {
    const std::uint64_t ad = a % p, id = i % p;
    if (id > ad) return 0;
    r = r * (binomial(ad, id) % p) % p;
    a /= p;
    i /= p;
  }
  return static_cast<std::uint32_t>(r);
}

namespace {

void weight_rec(unsigned n, unsigned left, std::vector<std::uint32_t>& cur,
                std::vector<MonomialIndex>& out) {
  if (cur.size() + 1 == n) {
    cur.push_back(left);
    out.push_back({cur});
    cur.pop_back();
    return;
  }
  for (unsigned e = left + 1; e-- > 0;) {
    cur.push_back(e);
    weight_rec(n, left - e, cur, out);
    cur.pop_back();
  }
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
  return mod_pow(b, e, p);
}

// g^{(j)}(a) for a monomial g.
std::uint32_t monomial_derivative_at(const MonomialIndex& g,
                                     const MonomialIndex& j,
                                     std::span<const Residue> a,
                                     std::uint32_t p) {
  std::uint64_t v = 1;
  for (std::size_t t = 0; t < g.exponents.size(); ++t) {
    const std::uint32_t ge = g.exponents[t], je = j.exponents[t];
    if (je > ge) return 0;
    v = v * binom_mod_p(ge, je, p) % p;
    if (v == 0) return 0;
    v = v * pow_mod(a[t] % p, ge - je, p) % p;
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<MonomialIndex> monomials_of_weight(unsigned n, unsigned d) {
  if (n < 1) throw InvalidArgument("monomials: n must be >= 1");
  std::vector<MonomialIndex> out;
  std::vector<std::uint32_t> cur;
  weight_rec(n, d, cur, out);
  return out;
}

std::vector<MonomialIndex> monomials_up_to(unsigned n, unsigned d) {
  std::vector<MonomialIndex> out;
  for (unsigned w = 0; w <= d; ++w) {
    auto part = monomials_of_weight(n, w);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

GFpPoly::GFpPoly(std::uint32_t p, unsigned n) : p_(p), n_(n) {
  if (!is_prime(p)) throw InvalidArgument("polynomial field must be prime");
  if (n < 1) throw InvalidArgument("polynomial needs at least one variable");
}

void GFpPoly::add_term(const MonomialIndex& e, std::int64_t c) {
  if (e.exponents.size() != n_) {
    throw InvalidArgument("monomial has wrong number of variables");
  }
  std::int64_t r = c % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  if (r == 0) return;
  auto [it, inserted] = terms_.emplace(e, 0);
  it->second = static_cast<std::uint32_t>((it->second + r) % p_);
  if (it->second == 0) terms_.erase(it);
}

int GFpPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.weight()));
  return d;
}

std::uint32_t GFpPoly::evaluate(std::span<const Residue> x) const {
  if (x.size() != n_) throw InvalidArgument("evaluation point dimension");
  std::uint64_t acc = 0;
  for (const auto& [e, c] : terms_) {
    std::uint64_t v = c;
    for (std::size_t t = 0; t < n_; ++t) {
      v = v * pow_mod(x[t] % p_, e.exponents[t], p_) % p_;
    }
    acc = (acc + v) % p_;
  }
  return static_cast<std::uint32_t>(acc);
}

GFpPoly hasse_derivative(const GFpPoly& f, const MonomialIndex& i) {
  if (i.exponents.size() != f.n()) {
    throw InvalidArgument("derivative index has wrong number of variables");
  }
  GFpPoly out(f.p(), f.n());
  for (const auto& [a, c] : f.terms()) {
    std::uint64_t coef = c;
    MonomialIndex rest{a.exponents};
    bool ok = true;
    for (std::size_t t = 0; t < a.exponents.size() && ok; ++t) {
      if (i.exponents[t] > a.exponents[t]) {
        ok = false;
        break;
      }
      coef = coef * binom_mod_p(a.exponents[t], i.exponents[t], f.p()) % f.p();
      rest.exponents[t] -= i.exponents[t];
    }
    if (ok && coef != 0) out.add_term(rest, static_cast<std::int64_t>(coef));
  }
  return out;
}

std::uint32_t multiplicity(const GFpPoly& f, std::span<const Residue> a) {
  if (f.is_zero()) return kInfiniteMultiplicity;
  const auto deg = static_cast<unsigned>(f.degree());
  for (unsigned w = 0; w <= deg; ++w) {
    for (const auto& i : monomials_of_weight(f.n(), w)) {
      if (hasse_derivative(f, i).evaluate(a) != 0) return w;
    }
  }
  // Unreachable: the derivative at a top-degree exponent is a non-zero constant.
  throw AssertionFailure("multiplicity exceeded the degree");
}

SzMultCheck sz_mult_check(const GFpPoly& f, std::span<const Residue> u) {
  if (f.is_zero()) {
    throw InvalidArgument("Schwartz-Zippel check needs a non-zero polynomial");
  }
  SzMultCheck out;
  const std::size_t n = f.n();
  const std::uint64_t usize = u.size();
  out.bound = static_cast<std::uint64_t>(f.degree()) *
              ipow(usize, static_cast<unsigned>(n - 1));
  const std::uint64_t total = ipow(usize, static_cast<unsigned>(n));
  Coords a(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t t = n; t-- > 0;) {
      a[t] = u[rest % usize];
      rest /= usize;
    }
    out.sum += multiplicity(f, a);
  }
  out.holds = out.sum <= out.bound;
  return out;
}

GFpMatrix eval_matrix(const EvalMapSpec& spec) {
  if (spec.m < 1) throw InvalidArgument("eval_matrix: m must be >= 1");
  const auto derivs = monomials_up_to(spec.n, spec.m - 1);
  const auto basis = spec.domain == DegreeDomain::kHomogeneous
                         ? monomials_of_weight(spec.n, spec.degree)
                         : monomials_up_to(spec.n, spec.degree);
  GFpMatrix out(spec.p, spec.points.size() * derivs.size(), basis.size());
  for (std::size_t x = 0; x < spec.points.size(); ++x) {
    if (spec.points[x].size() != spec.n) {
      throw InvalidArgument("eval_matrix: point dimension");
    }
    for (std::size_t j = 0; j < derivs.size(); ++j) {
      auto row = out.row_mut(x * derivs.size() + j);
      for (std::size_t g = 0; g < basis.size(); ++g) {
        row[g] = monomial_derivative_at(basis[g], derivs[j], spec.points[x],
                                        spec.p);
      }
    }
  }
  return out;
}

GFpMatrix direction_eval_matrix(const Coords& b, std::uint32_t p, unsigned n,
                                unsigned k) {
  EvalMapSpec s;
  s.p = p;
  s.n = n;
  s.points = {b};
  s.m = k;
  s.domain = DegreeDomain::kHomogeneous;
  s.degree = k * p - 1;
  return eval_matrix(s);
}

DecodingMatrix decoding_matrix(const Line& line, const RingSpec& spec,
                               unsigned k, std::optional<unsigned> m_opt) {
  if (spec.kind() != RingKind::kPrime) {
    throw InvalidArgument("decoding_matrix: lines must live in F_p^n");
  }
  const auto p = static_cast<std::uint32_t>(spec.modulus());
  const auto n = static_cast<unsigned>(spec.dim());
  if (k == 0 || k % p != 0) {
    throw InvalidArgument("decoding_matrix: p = " + std::to_string(p) +
                          " must divide k = " + std::to_string(k));
  }
  const unsigned m = m_opt.value_or(2 * k - k / p);

  EvalMapSpec along;
  along.p = p;
  along.n = n;
  along.points = line_points(line, spec);
  along.m = m;
  along.domain = DegreeDomain::kHomogeneous;
  along.degree = k * p - 1;
  const GFpMatrix a = eval_matrix(along);
  const GFpMatrix b = direction_eval_matrix(line.dir.rep, p, n, k);

  GFpMatrix partial;
  try {
    partial = solve_row_factor(a, b);
  } catch (const NotFactorable& e) {
    throw NotFactorable("decoding matrix for line through " +
                            coords_to_string(line.base) + " direction " +
                            coords_to_string(line.dir.rep) + " with k = " +
                            std::to_string(k) + ", m = " + std::to_string(m) +
                            ": " + e.what(),
                        e.row());
  }

  const std::size_t dm = dim_leq(n, m - 1);
  DecodingMatrix out;
  out.line = line;
  out.k = k;
  out.m = m;
  out.matrix = GFpMatrix(p, partial.rows(), spec.num_points() * dm);
  for (std::size_t t = 0; t < along.points.size(); ++t) {
    const std::uint64_t x = point_index(along.points[t], spec);
    for (std::size_t j = 0; j < dm; ++j) {
      for (std::size_t r = 0; r < partial.rows(); ++r) {
        out.matrix.set(r, x * dm + j, partial.at(r, t * dm + j));
      }
    }
  }
  return out;
}

}  // namespace kakeya
