#include "kakeya/incidence.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "kakeya/polyspace.hpp"

namespace kakeya {

namespace {

void check_guard(std::uint64_t rows, std::uint64_t cols, std::size_t guard,
                 const std::string& what) {
  if (cols != 0 && rows > guard / cols) {
    throw GuardExceeded(what + ": " + std::to_string(rows) + " x " +
                        std::to_string(cols) + " exceeds the cell cap of " +
                        std::to_string(guard));
  }
}

GFpMatrix inner_product_zero_matrix(std::uint32_t p, const RingSpec& spec,
                                    std::size_t guard, const std::string& what) {
  const std::uint64_t size = spec.num_points();
  check_guard(size, size, guard, what);
  std::vector<Coords> pts;
  pts.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) pts.push_back(index_point(i, spec));
  GFpMatrix w(p, size, size);
  for (std::uint64_t x = 0; x < size; ++x) {
    auto row = w.row_mut(x);
    for (std::uint64_t y = 0; y < size; ++y) {
      row[y] = inner_product(pts[x], pts[y], spec.modulus()) == 0 ? 1 : 0;
    }
  }
  return w;
}

}  // namespace

std::uint64_t HyperplaneSet::plane_size() const {
  return static_cast<std::uint64_t>(
      std::count(in_plane.begin(), in_plane.end(), true));
}

GFpMatrix HyperplaneSet::indicator(std::uint32_t p, bool complement) const {
  GFpMatrix row(p, 1, in_plane.size());
  for (std::size_t i = 0; i < in_plane.size(); ++i) {
    if (in_plane[i] != complement) row.set(0, i, 1);
  }
  return row;
}

HyperplaneSet hyperplane(std::span<const Residue> b, const RingSpec& spec) {
  if (b.size() != static_cast<std::size_t>(spec.dim())) {
    throw InvalidArgument("hyperplane normal has wrong dimension");
  }
  HyperplaneSet h;
  h.b.assign(b.begin(), b.end());
  const std::uint64_t size = spec.num_points();
  h.in_plane.resize(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    h.in_plane[i] = inner_product(index_point(i, spec), b, spec.modulus()) == 0;
  }
  return h;
}

GFpMatrix build_W(std::uint32_t p, unsigned n, std::size_t guard) {
  return build_W_pk(p, 1, n, guard);
}

GFpMatrix build_W_pk(std::uint32_t p, unsigned k, unsigned n,
                     std::size_t guard) {
  if (!is_prime(p)) throw InvalidArgument("W: p must be prime");
  if (k < 1) throw InvalidArgument("W: k must be >= 1");
  const RingSpec spec = RingSpec::make(ipow(p, k), static_cast<int>(n));
  return inner_product_zero_matrix(
      p, spec, guard,
      "W_{" + std::to_string(p) + "^" + std::to_string(k) + "," +
          std::to_string(n) + "}");
}

bool line_action_check(const Line& line, const RingSpec& spec) {
  if (spec.kind() != RingKind::kPrime) {
    throw InvalidArgument("line action lemma is stated over F_p^n");
  }
  const auto p = static_cast<std::uint32_t>(spec.modulus());
  const GFpMatrix w = build_W(p, static_cast<unsigned>(spec.dim()));
  const auto idx = line_indices(line, spec);
  const GFpMatrix product =
      GFpMatrix::indicator(p, spec.num_points(), idx) * w;
  const GFpMatrix expected = hyperplane(line.dir.rep, spec).indicator(p, true);
  return product == expected;
}

RankFormulaCheck rank_formula_check(std::uint32_t p, unsigned n,
                                    std::size_t guard) {
  RankFormulaCheck out;
  out.computed = rank(build_W(p, n, guard));
  out.formula = binomial(p + n - 2, n - 1) + 1;
  out.holds = out.computed == out.formula;
  return out;
}

MvVerdict mv_verify(const MVFamily& fam, std::uint32_t p, unsigned k,
                    unsigned n) {
  MvVerdict out;
  const RingSpec spec = RingSpec::make(ipow(p, k), static_cast<int>(n));
  if (fam.u.size() != fam.v.size()) {
    out.message = "U and V have different lengths";
    return out;
  }
  for (const auto* side : {&fam.u, &fam.v}) {
    for (const auto& x : *side) {
      if (x.size() != n ||
          std::any_of(x.begin(), x.end(),
                      [&](Residue c) { return c >= spec.modulus(); })) {
        out.message = "vector " + coords_to_string(x) + " is not in " +
                      spec.to_string();
        return out;
      }
    }
  }
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      const bool zero = inner_product(fam.u[i], fam.v[j], spec.modulus()) == 0;
      if (zero != (i == j)) {
        out.offending = std::make_pair(i, j);
        out.message = "<u_" + std::to_string(i) + ", v_" + std::to_string(j) +
                      "> " + (zero ? "vanishes" : "does not vanish");
        return out;
      }
    }
  }
  // The (U,V) submatrix of W_{p^k,n}, read through point indices.
  GFpMatrix sub(p, fam.size(), fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      sub.set(i, j,
              inner_product(fam.u[i], fam.v[j], spec.modulus()) == 0 ? 1 : 0);
    }
  }
  out.identity_submatrix = sub == GFpMatrix::identity(p, fam.size());
  out.valid = out.identity_submatrix;
  if (!out.valid) out.message = "submatrix is not the identity";
  return out;
}

std::size_t mv_rank_bound(const MVFamily& fam) { return fam.size(); }

MvSearchResult mv_search(std::uint32_t p, unsigned k, unsigned n,
                         std::size_t target_size, std::uint64_t budget) {
  if (budget == 0) throw InvalidArgument("mv_search: budget must be positive");
  const RingSpec spec = RingSpec::make(ipow(p, k), static_cast<int>(n));
  const std::uint64_t size = spec.num_points();
  check_guard(size, size, kDefaultCellGuard, "mv_search inner products");
  std::vector<Coords> pts;
  for (std::uint64_t i = 0; i < size; ++i) pts.push_back(index_point(i, spec));
  std::vector<std::uint8_t> zero(size * size);
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      zero[x * size + y] = inner_product(pts[x], pts[y], spec.modulus()) == 0;
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cands;
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      if (zero[x * size + y]) cands.emplace_back(x, y);
    }
  }

  MvSearchResult res;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> chosen, best;
  bool stop = false;
  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    if (chosen.size() > best.size()) best = chosen;
    if (best.size() >= target_size) {
      res.reached_target = true;
      stop = true;
      return;
    }
    for (std::size_t c = start; c < cands.size() && !stop; ++c) {
      const auto [u, v] = cands[c];
      if (!chosen.empty() && u <= chosen.back().first) continue;
      bool ok = true;
      for (const auto& [ui, vi] : chosen) {
        if (zero[u * size + vi] || zero[ui * size + v]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (++res.nodes > budget) {
        stop = true;
        return;
      }
      chosen.emplace_back(u, v);
      dfs(c + 1);
      chosen.pop_back();
    }
  };
  dfs(0);
  res.nodes = std::min(res.nodes, budget);
  for (const auto& [u, v] : best) {
    res.family.u.push_back(pts[u]);
    res.family.v.push_back(pts[v]);
  }
  return res;
}

}  // namespace kakeya
