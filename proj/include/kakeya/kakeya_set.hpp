#pragma once

// Kakeya sets over Z/NZ: verification, constructions, line matrices and an
// exact minimal-size search for tiny instances.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kakeya/gfp_matrix.hpp"
#include "kakeya/ring.hpp"

namespace kakeya {

class KakeyaSet {
 public:
  explicit KakeyaSet(RingSpec spec);

  const RingSpec& spec() const { return spec_; }
  std::size_t size() const { return points_.size(); }
  // Sorted point indices.
  const std::vector<std::uint64_t>& points() const { return points_; }
  bool contains(std::uint64_t index) const;
  bool contains(std::span<const Residue> coords) const;

  // Keyed by canonical direction representative.
  const std::map<Coords, Line>& witness() const { return witness_; }
  const Line* witness_for(const Direction& d) const;

  void add_point(std::uint64_t index);
  void add_points(std::span<const std::uint64_t> indices);
  // Adds the points of `line` and records it as the witness for its direction.
  void add_line(const Line& line);
  // Records a witness without touching the point set.
  void set_witness(const Line& line);

 private:
  RingSpec spec_;
  std::vector<std::uint64_t> points_;
  std::vector<bool> member_;
  std::map<Coords, Line> witness_;
};

struct VerifyResult {
  bool valid = false;
  std::vector<Direction> missing;     // no witness recorded
  std::vector<Direction> uncontained; // witness not inside the point set
  std::vector<std::string> problems;  // malformed witness entries
};
VerifyResult verify(const KakeyaSet& s);

// Lexicographically smallest base point among lines in direction d contained
// in the point set, if any.
std::optional<Line> first_contained_line(const KakeyaSet& s,
                                         const Direction& d);
// Same point set, witnesses replaced by first_contained_line per direction.
KakeyaSet with_canonical_witnesses(const KakeyaSet& s);

// Same point set; each direction gets a uniformly random contained line.
KakeyaSet reassign_witnesses(const KakeyaSet& s, std::mt19937_64& rng);

// All of R^n with the line through the origin in every direction.
KakeyaSet full_set(const RingSpec& spec);

// Parabola-tangent construction in F_p^n for odd p; full_set for p = 2.
KakeyaSet tangent_construction(std::uint32_t p, unsigned n);

// CRT product of one set per prime factor of `spec`.
KakeyaSet crt_product(std::span<const KakeyaSet> sets, const RingSpec& spec);

// S^t inside R^{tn}; witnesses assembled from per-block component lines.
KakeyaSet power_product(const KakeyaSet& s, unsigned t);

// Union of the witness lines (the trimmed set S').
KakeyaSet trim(const KakeyaSet& s);

enum class ColumnOrder { kPoint, kCrt };

// One row per direction in enumeration order: indicator of its witness line.
// Characteristic defaults to the smallest prime factor of N.
GFpMatrix line_matrix(const KakeyaSet& s,
                      std::optional<std::uint32_t> p = std::nullopt,
                      ColumnOrder order = ColumnOrder::kPoint);

// Witness lines picked greedily, each not covered by the union of earlier
// picks; at least ceil(|S'|/N) of them.
std::vector<Line> greedy_independent_lines(const KakeyaSet& s);

struct MinKakeyaResult {
  std::size_t size = 0;
  KakeyaSet set;
  std::uint64_t nodes = 0;
};
// Exact branch-and-bound over one line per direction minimizing the union.
// Throws GuardExceeded if the node budget `cap` is exhausted.
MinKakeyaResult min_kakeya_search(const RingSpec& spec,
                                  std::uint64_t cap = 50'000'000);

// {"N","n","points":[[..],..],"witness":[{"dir":[..],"base":[..]},..]}.
nlohmann::json to_json(const KakeyaSet& s);
// Parses and re-verifies; throws InvalidArgument on malformed input. The
// returned set may still fail verify() (missing or uncontained witnesses).
KakeyaSet kakeya_from_json(const nlohmann::json& j);

}  // namespace kakeya
