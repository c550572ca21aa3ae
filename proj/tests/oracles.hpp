#pragma once

// Reference computations used by the tests. They deliberately avoid the
// library's own routines: slow, direct, and written from the definitions.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;

inline std::int64_t modp(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  // Fermat; p prime.
  std::int64_t r = 1, b = modp(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Rank by inserting rows one at a time into a basis keyed by leading column.
inline std::size_t rank(const std::vector<Vec>& rows, std::int64_t p) {
  std::map<std::size_t, Vec> basis;
  for (Vec v : rows) {
    for (auto& x : v) x = modp(x, p);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c] == 0) continue;
      auto it = basis.find(c);
      if (it == basis.end()) {
        const std::int64_t inv = inv_mod(v[c], p);
        for (auto& x : v) x = x * inv % p;
        basis.emplace(c, v);
        break;
      }
      const std::int64_t f = v[c];
      for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = modp(v[j] - f * it->second[j], p);
      }
    }
  }
  return basis.size();
}

inline std::uint64_t binomial(unsigned n, unsigned k) {
  std::vector<std::vector<std::uint64_t>> t(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    t[i].assign(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return k > n ? 0 : t[n][k];
}

inline std::vector<Vec> all_vectors(std::int64_t N, int n) {
  std::vector<Vec> out(1, Vec{});
  for (int j = 0; j < n; ++j) {
    std::vector<Vec> next;
    for (const auto& v : out) {
      for (std::int64_t x = 0; x < N; ++x) {
        Vec w = v;
        w.push_back(x);
        next.push_back(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t N) {
  std::vector<std::int64_t> ps;
  for (std::int64_t q = 2; q * q <= N; ++q) {
    if (N % q == 0) {
      ps.push_back(q);
      while (N % q == 0) N /= q;
    }
  }
  if (N > 1) ps.push_back(N);
  return ps;
}

// Valid direction: non-zero mod every prime for square-free N; some unit
// coordinate for prime powers. Both are "non-zero mod every prime factor".
inline bool valid_direction(const Vec& b, std::int64_t N) {
  for (std::int64_t p : prime_factors(N)) {
    if (std::all_of(b.begin(), b.end(), [&](std::int64_t x) { return x % p == 0; })) {
      return false;
    }
  }
  return true;
}

// Smallest vector in the orbit of b under multiplication by units.
inline Vec orbit_min(const Vec& b, std::int64_t N) {
  Vec best = b;
  for (std::int64_t u = 1; u < N; ++u) {
    if (std::gcd(u, N) != 1) continue;
    Vec w = b;
    for (auto& x : w) x = x * u % N;
    best = std::min(best, w);
  }
  return best;
}

inline std::set<Vec> direction_classes(std::int64_t N, int n) {
  std::set<Vec> out;
  for (const auto& b : all_vectors(N, n)) {
    if (valid_direction(b, N)) out.insert(orbit_min(b, N));
  }
  return out;
}

inline std::set<Vec> line(const Vec& a, const Vec& b, std::int64_t N) {
  std::set<Vec> pts;
  for (std::int64_t t = 0; t < N; ++t) {
    Vec x(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) x[j] = (a[j] + t * b[j]) % N;
    pts.insert(x);
  }
  return pts;
}

// Definition check: a full line in every direction class.
inline bool is_kakeya(const std::set<Vec>& s, std::int64_t N, int n) {
  for (const auto& b : direction_classes(N, n)) {
    bool found = false;
    for (const auto& a : s) {
      const auto l = line(a, b, N);
      if (std::includes(s.begin(), s.end(), l.begin(), l.end())) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline std::int64_t dot(const Vec& a, const Vec& b, std::int64_t N) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s = (s + a[j] * b[j]) % N;
  return s;
}

// W_{q,n} rows over the integers, points in mixed-radix order.
inline std::vector<Vec> incidence(std::int64_t q, int n) {
  const auto pts = all_vectors(q, n);
  std::vector<Vec> w;
  for (const auto& x : pts) {
    Vec row;
    for (const auto& y : pts) row.push_back(dot(x, y, q) == 0 ? 1 : 0);
    w.push_back(row);
  }
  return w;
}

// Complex value of sum c_i gamma^i with gamma = exp(2 pi i / order).
inline std::complex<double> embed(const std::vector<double>& coeffs,
                                  std::uint64_t order) {
  const double pi = std::acos(-1.0);
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    s += coeffs[i] * std::polar(1.0, 2 * pi * static_cast<double>(i) /
                                         static_cast<double>(order));
  }
  return s;
}

// Numerical rank with partial pivoting; fine for the tiny well-conditioned
// matrices used here.
inline std::size_t complex_rank(std::vector<std::vector<std::complex<double>>> m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows; ++i) {
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    }
    if (std::abs(m[piv][c]) < 1e-9) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const auto f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
