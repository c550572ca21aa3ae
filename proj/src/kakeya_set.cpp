#include "kakeya/kakeya_set.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>

namespace kakeya {

KakeyaSet::KakeyaSet(RingSpec spec) : spec_(std::move(spec)) {
  member_.assign(spec_.num_points(), false);
}

bool KakeyaSet::contains(std::uint64_t index) const {
  return index < member_.size() && member_[index];
}

bool KakeyaSet::contains(std::span<const Residue> coords) const {
  return contains(point_index(coords, spec_));
}

const Line* KakeyaSet::witness_for(const Direction& d) const {
  auto it = witness_.find(d.rep);
  return it == witness_.end() ? nullptr : &it->second;
}

void KakeyaSet::add_point(std::uint64_t index) {
  if (index >= member_.size()) throw InvalidArgument("point out of range");
  if (member_[index]) return;
  member_[index] = true;
  points_.insert(std::lower_bound(points_.begin(), points_.end(), index),
                 index);
}

void KakeyaSet::add_points(std::span<const std::uint64_t> indices) {
  bool appended = false;
  for (std::uint64_t i : indices) {
    if (i >= member_.size()) throw InvalidArgument("point out of range");
    if (member_[i]) continue;
    member_[i] = true;
    points_.push_back(i);
    appended = true;
  }
  if (appended) std::sort(points_.begin(), points_.end());
}

void KakeyaSet::add_line(const Line& line) {
  add_points(line_indices(line, spec_));
  set_witness(line);
}

void KakeyaSet::set_witness(const Line& line) {
  witness_.insert_or_assign(line.dir.rep, line);
}

VerifyResult verify(const KakeyaSet& s) {
  VerifyResult r;
  const auto dirs = enumerate_directions(s.spec());
  for (const auto& d : dirs) {
    const Line* w = s.witness_for(d);
    if (w == nullptr) {
      r.missing.push_back(d);
      continue;
    }
    bool inside = true;
    for (std::uint64_t idx : line_indices(*w, s.spec())) {
      inside = inside && s.contains(idx);
    }
    if (!inside) r.uncontained.push_back(d);
  }
  for (const auto& [key, line] : s.witness()) {
    if (!is_valid_direction(key, s.spec())) {
      r.problems.push_back("witness key " + coords_to_string(key) +
                           " is not a direction");
      continue;
    }
    if (canonical_direction(key, s.spec()).rep != key) {
      r.problems.push_back("witness key " + coords_to_string(key) +
                           " is not canonical");
    }
    if (line.dir.rep != key) {
      r.problems.push_back("witness line direction " +
                           coords_to_string(line.dir.rep) +
                           " does not match key " + coords_to_string(key));
    }
  }
  r.valid = r.missing.empty() && r.uncontained.empty() && r.problems.empty();
  return r;
}

std::optional<Line> first_contained_line(const KakeyaSet& s,
                                         const Direction& d) {
  for (std::uint64_t idx : s.points()) {
    const Coords x = index_point(idx, s.spec());
    bool inside = true;
    for (const auto& pt : line_points(x, d.rep, s.spec())) {
      if (!s.contains(pt)) {
        inside = false;
        break;
      }
    }
    // x is the smallest point of its line when it is the first one visited.
    if (inside) return make_line(x, d, s.spec());
  }
  return std::nullopt;
}

KakeyaSet with_canonical_witnesses(const KakeyaSet& s) {
  KakeyaSet out(s.spec());
  out.add_points(s.points());
  for (const auto& d : enumerate_directions(s.spec())) {
    if (auto line = first_contained_line(s, d)) out.set_witness(*line);
  }
  return out;
}

KakeyaSet reassign_witnesses(const KakeyaSet& s, std::mt19937_64& rng) {
  KakeyaSet out(s.spec());
  out.add_points(s.points());
  for (const auto& d : enumerate_directions(s.spec())) {
    std::vector<Line> inside;
    for (std::uint64_t idx : s.points()) {
      const Coords x = index_point(idx, s.spec());
      Line l = make_line(x, d, s.spec());
      if (l.base != x) continue;
      const auto pts = line_indices(l, s.spec());
      if (std::all_of(pts.begin(), pts.end(),
                      [&](std::uint64_t i) { return s.contains(i); })) {
        inside.push_back(std::move(l));
      }
    }
    if (inside.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, inside.size() - 1);
    out.set_witness(inside[pick(rng)]);
  }
  return out;
}

KakeyaSet full_set(const RingSpec& spec) {
  KakeyaSet s(spec);
  std::vector<std::uint64_t> all(spec.num_points());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
  s.add_points(all);
  const Coords origin(static_cast<std::size_t>(spec.dim()), 0);
  for (const auto& d : enumerate_directions(spec)) {
    s.set_witness(make_line(origin, d, spec));
  }
  return s;
}

namespace {

KakeyaSet tangent_rec(std::uint32_t p, unsigned n,
                      const std::vector<bool>& square_or_zero) {
  const RingSpec spec = RingSpec::make(p, static_cast<int>(n));
  if (n == 1) return full_set(spec);
  const KakeyaSet lower = tangent_rec(p, n - 1, square_or_zero);

  KakeyaSet s(spec);
  // A_n: every t^2 - y_i is a square or zero.
  std::vector<std::uint64_t> pts;
  for (std::uint64_t idx = 0; idx < spec.num_points(); ++idx) {
    const Coords x = index_point(idx, spec);
    const std::uint64_t t = x[n - 1];
    bool ok = true;
    for (unsigned i = 0; i + 1 < n && ok; ++i) {
      ok = square_or_zero[(t * t % p + p - x[i]) % p];
    }
    if (ok) pts.push_back(idx);
  }
  // K_{n-1} x {0}.
  for (std::uint64_t idx : lower.points()) {
    Coords x = index_point(idx, lower.spec());
    x.push_back(0);
    pts.push_back(point_index(x, spec));
  }
  s.add_points(pts);

  const std::uint64_t inv4 = mod_inverse(4 % p, p);
  for (const auto& d : enumerate_directions(spec)) {
    const Residue last = d.rep[n - 1];
    if (last != 0) {
      // Scale to (b_1..b_{n-1}, 1); tangent line through (-b_i^2/4, 0).
      const std::uint64_t inv = mod_inverse(last, p);
      Coords base(n, 0);
      for (unsigned i = 0; i + 1 < n; ++i) {
        const std::uint64_t b = d.rep[i] * inv % p;
        base[i] = (p - b * b % p * inv4 % p) % p;
      }
      s.set_witness(make_line(base, d, spec));
    } else {
      const Coords head(d.rep.begin(), d.rep.end() - 1);
      const Direction dl = canonical_direction(head, lower.spec());
      const Line* w = lower.witness_for(dl);
      if (w == nullptr) throw AssertionFailure("tangent: missing lower witness");
      Coords base = w->base;
      base.push_back(0);
      s.set_witness(make_line(base, d, spec));
    }
  }
  return s;
}

}  // namespace

KakeyaSet tangent_construction(std::uint32_t p, unsigned n) {
  if (!is_prime(p)) throw InvalidArgument("tangent construction needs prime p");
  if (n < 1) throw InvalidArgument("tangent construction needs n >= 1");
  if (p == 2) return full_set(RingSpec::make(2, static_cast<int>(n)));
  std::vector<bool> square_or_zero(p, false);
  for (std::uint64_t x = 0; x < p; ++x) square_or_zero[x * x % p] = true;
  return tangent_rec(p, n, square_or_zero);
}

KakeyaSet crt_product(std::span<const KakeyaSet> sets, const RingSpec& spec) {
  if (!spec.is_square_free()) {
    throw InvalidArgument("crt_product requires a square-free modulus");
  }
  if (sets.size() != spec.factors().size()) {
    throw InvalidArgument("crt_product: need one set per prime factor");
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!(sets[i].spec() == spec.component(i))) {
      throw InvalidArgument("crt_product: set " + std::to_string(i) +
                            " lives in " + sets[i].spec().to_string() +
                            ", expected " + spec.component(i).to_string());
    }
  }
  const auto n = static_cast<std::size_t>(spec.dim());
  KakeyaSet out(spec);
  std::vector<std::vector<Coords>> comp_pts(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::uint64_t idx : sets[i].points()) {
      comp_pts[i].push_back(index_point(idx, sets[i].spec()));
    }
  }
  std::vector<std::uint64_t> pts;
  std::vector<std::size_t> pick(sets.size(), 0);
  std::vector<Residue> parts(sets.size());
  Coords x(n);
  const bool any_empty = std::any_of(comp_pts.begin(), comp_pts.end(),
                                     [](const auto& v) { return v.empty(); });
  while (!any_empty) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < sets.size(); ++i) {
        parts[i] = comp_pts[i][pick[i]][j];
      }
      x[j] = crt_combine(parts, spec);
    }
    pts.push_back(point_index(x, spec));
    std::size_t i = sets.size();
    while (i-- > 0) {
      if (++pick[i] < comp_pts[i].size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  out.add_points(pts);

  for (const auto& d : enumerate_directions(spec)) {
    std::vector<Line> comps;
    bool complete = true;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Direction di = canonical_direction(d.components[i],
                                               sets[i].spec());
      const Line* w = sets[i].witness_for(di);
      if (w == nullptr) {
        complete = false;
        break;
      }
      comps.push_back(*w);
    }
    if (complete) out.set_witness(line_combine(comps, spec));
  }
  return out;
}

KakeyaSet power_product(const KakeyaSet& s, unsigned t) {
  const RingSpec& base_spec = s.spec();
  if (!base_spec.is_square_free()) {
    throw InvalidArgument("power_product requires a square-free modulus");
  }
  if (t < 1) throw InvalidArgument("power_product needs t >= 1");
  const auto n = static_cast<std::size_t>(base_spec.dim());
  const RingSpec spec = base_spec.with_dim(static_cast<int>(n * t));
  KakeyaSet out(spec);

  const std::uint64_t m = s.size();
  const std::uint64_t total = ipow(m, t);
  if (total > spec.num_points()) throw AssertionFailure("power size");
  std::vector<Coords> pts;
  for (std::uint64_t idx : s.points()) pts.push_back(index_point(idx, base_spec));
  std::vector<std::uint64_t> all;
  all.reserve(total);
  Coords x(n * t);
  for (std::uint64_t combo = 0; combo < total; ++combo) {
    std::uint64_t rest = combo;
    for (std::size_t blk = t; blk-- > 0;) {
      const auto& src = pts[rest % m];
      rest /= m;
      std::copy(src.begin(), src.end(), x.begin() + static_cast<std::ptrdiff_t>(blk * n));
    }
    all.push_back(point_index(x, spec));
  }
  out.add_points(all);

  const auto factors = base_spec.factors();
  std::vector<Residue> parts(factors.size());
  for (const auto& d : enumerate_directions(spec)) {
    Coords base(n * t);
    bool complete = true;
    for (std::size_t blk = 0; blk < t && complete; ++blk) {
      // Block direction c: agrees with the block of d modulo every prime where
      // that block is non-zero, and is e_1 modulo the others.
      Coords c(n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
          const std::uint64_t p = factors[i].prime;
          bool nonzero = false;
          for (std::size_t jj = 0; jj < n; ++jj) {
            nonzero = nonzero || d.rep[blk * n + jj] % p != 0;
          }
          parts[i] = nonzero ? d.rep[blk * n + j] % p : (j == 0 ? 1 : 0);
        }
        c[j] = crt_combine(parts, base_spec);
      }
      const Line* w = s.witness_for(canonical_direction(c, base_spec));
      if (w == nullptr) {
        complete = false;
        break;
      }
      std::copy(w->base.begin(), w->base.end(),
                base.begin() + static_cast<std::ptrdiff_t>(blk * n));
    }
    if (complete) out.set_witness(make_line(base, d, spec));
  }
  return out;
}

KakeyaSet trim(const KakeyaSet& s) {
  KakeyaSet out(s.spec());
  for (const auto& [key, line] : s.witness()) out.add_line(line);
  return out;
}

GFpMatrix line_matrix(const KakeyaSet& s, std::optional<std::uint32_t> p,
                      ColumnOrder order) {
  const VerifyResult v = verify(s);
  if (!v.valid) throw InvalidArgument("line_matrix: set is not a valid Kakeya set");
  const auto field = p.value_or(static_cast<std::uint32_t>(s.spec().smallest_prime()));
  const auto dirs = enumerate_directions(s.spec());
  std::vector<std::uint64_t> perm;
  if (order == ColumnOrder::kCrt) perm = crt_point_order(s.spec());
  GFpMatrix m(field, dirs.size(), s.spec().num_points());
  for (std::size_t r = 0; r < dirs.size(); ++r) {
    for (std::uint64_t idx : line_indices(*s.witness_for(dirs[r]), s.spec())) {
      m.set(r, order == ColumnOrder::kCrt ? perm[idx] : idx, 1);
    }
  }
  return m;
}

std::vector<Line> greedy_independent_lines(const KakeyaSet& s) {
  std::vector<bool> covered(s.spec().num_points(), false);
  std::vector<Line> picked;
  for (const auto& d : enumerate_directions(s.spec())) {
    const Line* w = s.witness_for(d);
    if (w == nullptr) continue;
    const auto idx = line_indices(*w, s.spec());
    const bool fresh = std::any_of(idx.begin(), idx.end(),
                                   [&](std::uint64_t i) { return !covered[i]; });
    if (!fresh) continue;
    for (std::uint64_t i : idx) covered[i] = true;
    picked.push_back(*w);
  }
  return picked;
}

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t popcount_new(const Bits& line, const Bits& have) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(line[i] & ~have[i]));
  }
  return c;
}

}  // namespace

MinKakeyaResult min_kakeya_search(const RingSpec& spec, std::uint64_t cap) {
  const std::uint64_t total = spec.num_points();
  if (total > (std::uint64_t{1} << 16)) {
    throw GuardExceeded("min_kakeya_search: " + spec.to_string() +
                        " has too many points for exhaustive search");
  }
  const std::size_t words = (total + 63) / 64;
  const auto dirs = enumerate_directions(spec);

  std::vector<std::vector<Line>> lines(dirs.size());
  std::vector<std::vector<Bits>> masks(dirs.size());
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const Coords x = index_point(idx, spec);
      Line l = make_line(x, dirs[d], spec);
      if (l.base != x) continue;  // visit each line once, from its smallest point
      Bits b(words, 0);
      for (std::uint64_t i : line_indices(l, spec)) b[i / 64] |= 1ULL << (i % 64);
      lines[d].push_back(std::move(l));
      masks[d].push_back(std::move(b));
    }
  }

  MinKakeyaResult res{0, KakeyaSet(spec), 0};
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> choice(dirs.size(), 0), best_choice;
  std::vector<Bits> unions(dirs.size() + 1, Bits(words, 0));

  std::function<void(std::size_t)> dfs = [&](std::size_t depth) {
    if (++res.nodes > cap) {
      throw GuardExceeded("min_kakeya_search: node budget of " +
                          std::to_string(cap) + " exhausted for " +
                          spec.to_string());
    }
    const Bits& have = unions[depth];
    const std::size_t cur = popcount(have);
    if (depth == dirs.size()) {
      if (cur < best) {
        best = cur;
        best_choice = choice;
      }
      return;
    }
    // Every remaining direction still needs at least its cheapest line.
    std::size_t extra = 0;
    for (std::size_t d = depth; d < dirs.size(); ++d) {
      std::size_t cheapest = std::numeric_limits<std::size_t>::max();
      for (const auto& m : masks[d]) cheapest = std::min(cheapest, popcount_new(m, have));
      extra = std::max(extra, cheapest);
    }
    if (cur + extra >= best) return;
    for (std::size_t l = 0; l < masks[depth].size(); ++l) {
      choice[depth] = l;
      Bits& next = unions[depth + 1];
      for (std::size_t w = 0; w < words; ++w) next[w] = have[w] | masks[depth][l][w];
      dfs(depth + 1);
    }
  };
  dfs(0);

  for (std::size_t d = 0; d < dirs.size(); ++d) {
    res.set.add_line(lines[d][best_choice[d]]);
  }
  res.size = res.set.size();
  return res;
}

nlohmann::json to_json(const KakeyaSet& s) {
  nlohmann::json j;
  j["N"] = s.spec().modulus();
  j["n"] = s.spec().dim();
  auto pts = nlohmann::json::array();
  for (std::uint64_t idx : s.points()) pts.push_back(index_point(idx, s.spec()));
  j["points"] = std::move(pts);
  auto wit = nlohmann::json::array();
  for (const auto& [key, line] : s.witness()) {
    wit.push_back({{"dir", line.dir.rep}, {"base", line.base}});
  }
  j["witness"] = std::move(wit);
  return j;
}

namespace {

Coords read_coords(const nlohmann::json& j, const RingSpec& spec,
                   const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(spec.dim())) {
    throw InvalidArgument(std::string(what) + " must be an array of " +
                          std::to_string(spec.dim()) + " residues");
  }
  Coords c;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= spec.modulus()) {
      throw InvalidArgument(std::string(what) + " has a coordinate outside [0, N)");
    }
    c.push_back(v.get<std::uint64_t>());
  }
  return c;
}

}  // namespace

KakeyaSet kakeya_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("n") ||
      !j.contains("points") || !j.contains("witness")) {
    throw InvalidArgument("Kakeya set JSON needs N, n, points and witness");
  }
  if (!j["N"].is_number_integer() || !j["n"].is_number_integer() ||
      j["N"].get<std::int64_t>() < 1 || j["n"].get<std::int64_t>() < 1) {
    throw InvalidArgument("N and n must be positive integers");
  }
  const RingSpec spec = RingSpec::make(j["N"].get<std::uint64_t>(),
                                       j["n"].get<int>());
  KakeyaSet s(spec);
  if (!j["points"].is_array() || !j["witness"].is_array()) {
    throw InvalidArgument("points and witness must be arrays");
  }
  std::vector<std::uint64_t> idx;
  for (const auto& p : j["points"]) {
    idx.push_back(point_index(read_coords(p, spec, "point"), spec));
  }
  s.add_points(idx);
  for (const auto& w : j["witness"]) {
    if (!w.is_object() || !w.contains("dir") || !w.contains("base")) {
      throw InvalidArgument("witness entries need dir and base");
    }
    const Coords dir = read_coords(w["dir"], spec, "witness dir");
    const Coords base = read_coords(w["base"], spec, "witness base");
    s.set_witness(make_line(base, dir, spec));
  }
  return s;
}

}  // namespace kakeya
