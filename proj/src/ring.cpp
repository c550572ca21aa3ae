#include "kakeya/ring.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

namespace kakeya {

std::uint64_t PrimeFactor::modulus() const { return ipow(prime, exponent); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw InvalidArgument("integer power overflows 64 bits");
    }
    r *= base;
  }
  return r;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp,
                      std::uint64_t mod) {
  unsigned __int128 r = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t mod) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(mod);
  std::int64_t new_r = static_cast<std::int64_t>(a % mod);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) {
    throw InvalidArgument(std::to_string(a) + " is not a unit mod " +
                          std::to_string(mod));
  }
  if (t < 0) t += static_cast<std::int64_t>(mod);
  return static_cast<std::uint64_t>(t);
}

RingSpec RingSpec::make(std::uint64_t modulus, int dim) {
  if (modulus < 2) throw InvalidArgument("modulus must be at least 2");
  if (dim < 1) throw InvalidArgument("dimension must be at least 1");
  RingSpec s;
  s.modulus_ = modulus;
  s.dim_ = dim;
  std::uint64_t rest = modulus;
  for (std::uint64_t d = 2; d * d <= rest; ++d) {
    if (rest % d != 0) continue;
    PrimeFactor f{d, 0};
    while (rest % d == 0) {
      rest /= d;
      ++f.exponent;
    }
    s.factors_.push_back(f);
  }
  if (rest > 1) s.factors_.push_back({rest, 1});

  const bool all_simple = std::all_of(
      s.factors_.begin(), s.factors_.end(),
      [](const PrimeFactor& f) { return f.exponent == 1; });
  if (s.factors_.size() == 1) {
    s.kind_ = all_simple ? RingKind::kPrime : RingKind::kPrimePower;
  } else if (all_simple) {
    s.kind_ = RingKind::kSquareFree;
  } else {
    throw InvalidArgument("modulus " + std::to_string(modulus) +
                          " is neither square-free nor a prime power");
  }
  return s;
}

std::uint64_t RingSpec::num_points() const {
  std::uint64_t r = ipow(modulus_, static_cast<unsigned>(dim_));
  if (r > (std::uint64_t{1} << 62)) throw GuardExceeded("N^n too large");
  return r;
}

RingSpec RingSpec::component(std::size_t i) const {
  return make(factors_.at(i).modulus(), dim_);
}

std::string RingSpec::to_string() const {
  std::ostringstream os;
  os << "(Z/" << modulus_ << "Z)^" << dim_;
  return os.str();
}

std::vector<Residue> crt_split(Residue x, const RingSpec& spec) {
  if (x >= spec.modulus()) throw InvalidArgument("residue out of range");
  std::vector<Residue> out;
  out.reserve(spec.factors().size());
  for (const auto& f : spec.factors()) out.push_back(x % f.modulus());
  return out;
}

Residue crt_combine(std::span<const Residue> parts, const RingSpec& spec) {
  const auto factors = spec.factors();
  if (parts.size() != factors.size()) {
    throw InvalidArgument("crt_combine: wrong number of components");
  }
  const std::uint64_t n = spec.modulus();
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::uint64_t m = factors[i].modulus();
    const std::uint64_t rest = n / m;
    const std::uint64_t coef = rest * mod_inverse(rest % m, m);
    acc = (acc + static_cast<unsigned __int128>(parts[i] % m) * coef) % n;
  }
  return static_cast<Residue>(acc);
}

std::uint64_t point_index(std::span<const Residue> coords,
                          const RingSpec& spec) {
  if (coords.size() != static_cast<std::size_t>(spec.dim())) {
    throw InvalidArgument("point has wrong dimension");
  }
  std::uint64_t idx = 0;
  for (Residue c : coords) {
    if (c >= spec.modulus()) throw InvalidArgument("coordinate out of range");
    idx = idx * spec.modulus() + c;
  }
  return idx;
}

Coords index_point(std::uint64_t index, const RingSpec& spec) {
  Coords c(static_cast<std::size_t>(spec.dim()));
  for (std::size_t j = c.size(); j-- > 0;) {
    c[j] = index % spec.modulus();
    index /= spec.modulus();
  }
  if (index != 0) throw InvalidArgument("point index out of range");
  return c;
}

std::uint64_t crt_point_index(std::span<const Residue> coords,
                              const RingSpec& spec) {
  if (coords.size() != static_cast<std::size_t>(spec.dim())) {
    throw InvalidArgument("point has wrong dimension");
  }
  std::uint64_t idx = 0;
  for (const auto& f : spec.factors()) {
    const std::uint64_t m = f.modulus();
    for (Residue c : coords) idx = idx * m + c % m;
  }
  return idx;
}

std::vector<std::uint64_t> crt_point_order(const RingSpec& spec) {
  const std::uint64_t total = spec.num_points();
  std::vector<std::uint64_t> perm(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    perm[i] = crt_point_index(index_point(i, spec), spec);
  }
  return perm;
}

Residue inner_product(std::span<const Residue> a, std::span<const Residue> b,
                      std::uint64_t modulus) {
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc = (acc + static_cast<unsigned __int128>(a[i]) * b[i]) % modulus;
  }
  return static_cast<Residue>(acc);
}

namespace {

// Scales v (mod m) so that its first coordinate that is a unit becomes 1.
// Returns false if no coordinate is a unit.
bool normalize_first_unit(Coords& v, std::uint64_t m, std::uint64_t p) {
  for (Residue x : v) {
    if (x % p == 0) continue;
    const std::uint64_t inv = mod_inverse(x, m);
    for (Residue& y : v) {
      y = static_cast<Residue>(static_cast<unsigned __int128>(y) * inv % m);
    }
    return true;
  }
  return false;
}

}  // namespace

Direction canonical_direction(std::span<const Residue> vec,
                              const RingSpec& spec) {
  if (vec.size() != static_cast<std::size_t>(spec.dim())) {
    throw InvalidArgument("direction has wrong dimension");
  }
  Direction d;
  const auto factors = spec.factors();
  for (const auto& f : factors) {
    const std::uint64_t m = f.modulus();
    Coords comp(vec.size());
    for (std::size_t j = 0; j < vec.size(); ++j) comp[j] = vec[j] % m;
    if (!normalize_first_unit(comp, m, f.prime)) {
      throw InvalidArgument("vector " + coords_to_string(vec) +
                            " is not a direction in " + spec.to_string());
    }
    d.components.push_back(std::move(comp));
  }
  d.rep.resize(vec.size());
  std::vector<Residue> parts(factors.size());
  for (std::size_t j = 0; j < vec.size(); ++j) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      parts[i] = d.components[i][j];
    }
    d.rep[j] = crt_combine(parts, spec);
  }
  return d;
}

bool is_valid_direction(std::span<const Residue> vec, const RingSpec& spec) {
  if (vec.size() != static_cast<std::size_t>(spec.dim())) return false;
  for (const auto& f : spec.factors()) {
    bool has_unit = false;
    for (Residue x : vec) has_unit = has_unit || (x % f.prime != 0);
    if (!has_unit) return false;
  }
  return true;
}

namespace {

// Canonical directions of (Z/mZ)^n for a prime power m = p^e, lex order.
std::vector<Coords> prime_power_directions(std::uint64_t m, std::uint64_t p,
                                           int n) {
  std::vector<Coords> out;
  const std::uint64_t total = ipow(m, static_cast<unsigned>(n));
  Coords v(static_cast<std::size_t>(n), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t j = v.size(); j-- > 0;) {
      v[j] = rest % m;
      rest /= m;
    }
    for (Residue x : v) {
      if (x % p == 0) continue;
      if (x == 1) out.push_back(v);
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Direction> enumerate_directions(const RingSpec& spec) {
  const auto factors = spec.factors();
  std::vector<std::vector<Coords>> per;
  per.reserve(factors.size());
  for (const auto& f : factors) {
    per.push_back(prime_power_directions(f.modulus(), f.prime, spec.dim()));
  }
  std::vector<Direction> out;
  out.reserve(count_directions(spec));
  std::vector<std::size_t> pick(factors.size(), 0);
  Coords rep(static_cast<std::size_t>(spec.dim()));
  std::vector<Residue> parts(factors.size());
  while (true) {
    Direction d;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      d.components.push_back(per[i][pick[i]]);
    }
    for (std::size_t j = 0; j < rep.size(); ++j) {
      for (std::size_t i = 0; i < factors.size(); ++i) {
        parts[i] = d.components[i][j];
      }
      rep[j] = crt_combine(parts, spec);
    }
    d.rep = rep;
    out.push_back(std::move(d));
    // Odometer with factor 0 outermost.
    std::size_t i = factors.size();
    while (i-- > 0) {
      if (++pick[i] < per[i].size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_directions(const RingSpec& spec) {
  std::uint64_t total = 1;
  const auto n = static_cast<unsigned>(spec.dim());
  for (const auto& f : spec.factors()) {
    const std::uint64_t m = f.modulus();
    const std::uint64_t with_unit = ipow(m, n) - ipow(m / f.prime, n);
    total *= with_unit / (m - m / f.prime);
  }
  return total;
}

std::vector<Coords> line_points(std::span<const Residue> base,
                                std::span<const Residue> dir_vec,
                                const RingSpec& spec) {
  if (!is_valid_direction(dir_vec, spec)) {
    throw InvalidArgument("vector " + coords_to_string(dir_vec) +
                          " is not a direction in " + spec.to_string());
  }
  if (base.size() != dir_vec.size()) {
    throw InvalidArgument("line base has wrong dimension");
  }
  const std::uint64_t n = spec.modulus();
  std::vector<Coords> pts(n, Coords(base.size()));
  for (std::uint64_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < base.size(); ++j) {
      pts[t][j] = static_cast<Residue>(
          (base[j] + static_cast<unsigned __int128>(t) * dir_vec[j]) % n);
    }
  }
  return pts;
}

std::vector<Coords> line_points(const Line& line, const RingSpec& spec) {
  return line_points(line.base, line.dir.rep, spec);
}

std::vector<std::uint64_t> line_indices(const Line& line,
                                        const RingSpec& spec) {
  std::vector<std::uint64_t> out;
  out.reserve(spec.modulus());
  for (const auto& pt : line_points(line, spec)) {
    out.push_back(point_index(pt, spec));
  }
  return out;
}

Line make_line(std::span<const Residue> through, const Direction& dir,
               const RingSpec& spec) {
  for (Residue x : through) {
    if (x >= spec.modulus()) throw InvalidArgument("coordinate out of range");
  }
  auto pts = line_points(through, dir.rep, spec);
  Line l;
  l.base = *std::min_element(pts.begin(), pts.end());
  l.dir = dir;
  return l;
}

Line make_line(std::span<const Residue> through,
               std::span<const Residue> dir_vec, const RingSpec& spec) {
  return make_line(through, canonical_direction(dir_vec, spec), spec);
}

std::vector<Line> line_split(const Line& line, const RingSpec& spec) {
  if (!spec.is_square_free()) {
    throw InvalidArgument("line_split requires a square-free modulus");
  }
  std::vector<Line> out;
  for (std::size_t i = 0; i < spec.factors().size(); ++i) {
    const RingSpec comp = spec.component(i);
    const std::uint64_t p = comp.modulus();
    Coords base(line.base.size());
    for (std::size_t j = 0; j < base.size(); ++j) base[j] = line.base[j] % p;
    out.push_back(make_line(base, line.dir.components[i], comp));
  }
  return out;
}

Line line_combine(std::span<const Line> parts, const RingSpec& spec) {
  if (parts.size() != spec.factors().size()) {
    throw InvalidArgument("line_combine: wrong number of components");
  }
  const auto n = static_cast<std::size_t>(spec.dim());
  Coords base(n), dir(n);
  std::vector<Residue> b(parts.size()), d(parts.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      b[i] = parts[i].base.at(j);
      d[i] = parts[i].dir.rep.at(j);
    }
    base[j] = crt_combine(b, spec);
    dir[j] = crt_combine(d, spec);
  }
  return make_line(base, dir, spec);
}

std::string coords_to_string(std::span<const Residue> c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ',';
    os << c[i];
  }
  os << ')';
  return os.str();
}

}  // namespace kakeya
