#pragma once

// Arithmetic and geometry over R = Z/NZ for prime, square-free and
// prime-power moduli: CRT, point indexing, projective directions and lines.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kakeya/error.hpp"

namespace kakeya {

using Residue = std::uint64_t;
using Coords = std::vector<Residue>;

enum class RingKind { kPrime, kPrimePower, kSquareFree };

struct PrimeFactor {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  std::uint64_t modulus() const;  // prime^exponent
  bool operator==(const PrimeFactor&) const = default;
};

class RingSpec {
 public:
  // Factorizes `modulus`. Rejects moduli that are neither square-free nor a
  // prime power, and dimension 0.
  static RingSpec make(std::uint64_t modulus, int dim);

  std::uint64_t modulus() const { return modulus_; }
  int dim() const { return dim_; }
  RingKind kind() const { return kind_; }
  std::span<const PrimeFactor> factors() const { return factors_; }

  // A prime counts as both square-free and a prime power.
  bool is_square_free() const { return kind_ != RingKind::kPrimePower; }
  bool is_prime_power() const { return kind_ != RingKind::kSquareFree; }
  std::uint64_t smallest_prime() const { return factors_.front().prime; }

  // N^n; throws if it does not fit in 63 bits.
  std::uint64_t num_points() const;

  RingSpec with_dim(int dim) const { return make(modulus_, dim); }
  // Spec of the i-th CRT component (Z/p_i^{e_i}Z)^n.
  RingSpec component(std::size_t i) const;

  std::string to_string() const;
  bool operator==(const RingSpec& o) const {
    return modulus_ == o.modulus_ && dim_ == o.dim_;
  }

 private:
  std::uint64_t modulus_ = 0;
  int dim_ = 0;
  RingKind kind_ = RingKind::kPrime;
  std::vector<PrimeFactor> factors_;
};

bool is_prime(std::uint64_t n);
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
// Inverse of a unit modulo `mod`; throws if not a unit.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t mod);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

// Residues of x modulo each p_i^{e_i}, in factor order.
std::vector<Residue> crt_split(Residue x, const RingSpec& spec);
Residue crt_combine(std::span<const Residue> parts, const RingSpec& spec);

// Mixed-radix order, coordinate 0 most significant.
std::uint64_t point_index(std::span<const Residue> coords, const RingSpec& spec);
Coords index_point(std::uint64_t index, const RingSpec& spec);

// Index in the CRT product order: per-factor point indices combined mixed
// radix with factor 0 most significant. Matches kron() of per-factor vectors.
std::uint64_t crt_point_index(std::span<const Residue> coords,
                              const RingSpec& spec);
// perm[point_index(x)] = crt_point_index(x).
std::vector<std::uint64_t> crt_point_order(const RingSpec& spec);

Residue inner_product(std::span<const Residue> a, std::span<const Residue> b,
                      std::uint64_t modulus);

// Canonical projective direction. For square-free N every component is
// non-zero with first non-zero coordinate 1; for p^k the first unit
// coordinate is 1. `rep` is the combined residue vector.
struct Direction {
  Coords rep;
  std::vector<Coords> components;
  bool operator==(const Direction& o) const { return rep == o.rep; }
  auto operator<=>(const Direction& o) const { return rep <=> o.rep; }
};

// Canonicalizes an arbitrary vector; throws InvalidArgument if it is not a
// valid direction for `spec`.
Direction canonical_direction(std::span<const Residue> vec,
                              const RingSpec& spec);
bool is_valid_direction(std::span<const Residue> vec, const RingSpec& spec);

// Deterministic ordered list of all directions.
std::vector<Direction> enumerate_directions(const RingSpec& spec);
std::uint64_t count_directions(const RingSpec& spec);

// {base + t*dir}. `base` is the lexicographically smallest point of the line,
// so equal point sets give equal Lines.
struct Line {
  Coords base;
  Direction dir;
  bool operator==(const Line& o) const {
    return base == o.base && dir == o.dir;
  }
};

Line make_line(std::span<const Residue> through, const Direction& dir,
               const RingSpec& spec);
// Validates `dir_vec` before building the line.
Line make_line(std::span<const Residue> through,
               std::span<const Residue> dir_vec, const RingSpec& spec);

// Points base + t*dir for t = 0..N-1.
std::vector<Coords> line_points(const Line& line, const RingSpec& spec);
std::vector<Coords> line_points(std::span<const Residue> base,
                                std::span<const Residue> dir_vec,
                                const RingSpec& spec);
std::vector<std::uint64_t> line_indices(const Line& line, const RingSpec& spec);

// Per-prime component lines of a line over square-free N.
std::vector<Line> line_split(const Line& line, const RingSpec& spec);
// Inverse of line_split.
Line line_combine(std::span<const Line> parts, const RingSpec& spec);

std::string coords_to_string(std::span<const Residue> c);

}  // namespace kakeya
