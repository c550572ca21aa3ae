#pragma once

// Point-hyperplane incidence matrices W_{p,n} and W_{p^k,n}, the action of
// W_{p,n} on line indicators, and matching-vector families.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kakeya/gfp_matrix.hpp"
#include "kakeya/ring.hpp"

namespace kakeya {

// H_b = {x : <x,b> = 0} and its complement, as a membership mask in point
// order.
struct HyperplaneSet {
  Coords b;
  std::vector<bool> in_plane;

  std::uint64_t plane_size() const;
  // 1 x N^n indicator over F_p of H_b (or of its complement).
  GFpMatrix indicator(std::uint32_t p, bool complement) const;
};

HyperplaneSet hyperplane(std::span<const Residue> b, const RingSpec& spec);

// p^n x p^n, entry (x,b) = [<x,b> = 0 mod p].
GFpMatrix build_W(std::uint32_t p, unsigned n,
                  std::size_t guard = kDefaultCellGuard);
// p^{kn} x p^{kn} over F_p, entry (x,y) = [<x,y> = 0 mod p^k]. Repeated rows
// are kept.
GFpMatrix build_W_pk(std::uint32_t p, unsigned k, unsigned n,
                     std::size_t guard = kDefaultCellGuard);

// 1_L * W_{p,n} == 1_{complement of H_b} over F_p, b the direction of L.
bool line_action_check(const Line& line, const RingSpec& spec);

struct RankFormulaCheck {
  std::size_t computed = 0;
  std::uint64_t formula = 0;  // C(p+n-2, n-1) + 1
  bool holds = false;
};
RankFormulaCheck rank_formula_check(std::uint32_t p, unsigned n,
                                    std::size_t guard = kDefaultCellGuard);

struct MVFamily {
  std::vector<Coords> u;
  std::vector<Coords> v;
  std::size_t size() const { return u.size(); }
};

struct MvVerdict {
  bool valid = false;
  // First (i,j) where <u_i,v_j> = 0 disagrees with i == j.
  std::optional<std::pair<std::size_t, std::size_t>> offending;
  bool identity_submatrix = false;
  std::string message;
};

MvVerdict mv_verify(const MVFamily& fam, std::uint32_t p, unsigned k,
                    unsigned n);
// Lower bound on rank(W_{p^k,n}) over any field; valid families only.
std::size_t mv_rank_bound(const MVFamily& fam);

struct MvSearchResult {
  MVFamily family;
  std::uint64_t nodes = 0;
  bool reached_target = false;
};
// Depth-first search over candidate pairs (u,v) with <u,v> = 0 in
// lexicographic order, u strictly increasing, stopping at `target_size` or
// after `budget` nodes. Returns the largest family seen.
MvSearchResult mv_search(std::uint32_t p, unsigned k, unsigned n,
                         std::size_t target_size, std::uint64_t budget);

}  // namespace kakeya
