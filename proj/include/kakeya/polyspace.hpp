#pragma once

// Multivariate polynomials over F_p with Hasse derivatives, multiplicities,
// evaluation-map matrices and line decoding matrices.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kakeya/gfp_matrix.hpp"
#include "kakeya/ring.hpp"

namespace kakeya {

// Exponent vector; weight is the total degree.
struct MonomialIndex {
  std::vector<std::uint32_t> exponents;
  std::uint32_t weight() const;
  auto operator<=>(const MonomialIndex&) const = default;
};

// delta_{n,d} = C(n+d-1, n-1): dimension of homogeneous degree-d forms.
std::uint64_t dim_homog(unsigned n, unsigned d);
// Delta_{n,d} = C(n+d, n): dimension of polynomials of degree <= d.
std::uint64_t dim_leq(unsigned n, unsigned d);
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// binom(a, i) mod p via Lucas' theorem.
std::uint32_t binom_mod_p(std::uint64_t a, std::uint64_t i, std::uint32_t p);

// Weight exactly d, descending lexicographic (x1^d first).
std::vector<MonomialIndex> monomials_of_weight(unsigned n, unsigned d);
// Weight <= d, ordered by weight then descending lexicographic.
std::vector<MonomialIndex> monomials_up_to(unsigned n, unsigned d);

class GFpPoly {
 public:
  GFpPoly(std::uint32_t p, unsigned n);

  std::uint32_t p() const { return p_; }
  unsigned n() const { return n_; }
  const std::map<MonomialIndex, std::uint32_t>& terms() const { return terms_; }

  // Adds c * x^e.
  void add_term(const MonomialIndex& e, std::int64_t c);
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial.
  int degree() const;
  std::uint32_t evaluate(std::span<const Residue> x) const;

  bool operator==(const GFpPoly&) const = default;

 private:
  std::uint32_t p_;
  unsigned n_;
  std::map<MonomialIndex, std::uint32_t> terms_;
};

// Coefficient of z^i in f(x+z).
GFpPoly hasse_derivative(const GFpPoly& f, const MonomialIndex& i);

inline constexpr std::uint32_t kInfiniteMultiplicity =
    std::numeric_limits<std::uint32_t>::max();

// Largest m with every Hasse derivative of weight < m vanishing at a;
// kInfiniteMultiplicity for the zero polynomial.
std::uint32_t multiplicity(const GFpPoly& f, std::span<const Residue> a);

struct SzMultCheck {
  std::uint64_t sum = 0;
  std::uint64_t bound = 0;
  bool holds = false;
};
// Sum of multiplicities over U^n against deg(f) * |U|^{n-1}.
SzMultCheck sz_mult_check(const GFpPoly& f, std::span<const Residue> u);

enum class DegreeDomain { kHomogeneous, kAtMost };

struct EvalMapSpec {
  std::uint32_t p = 2;
  unsigned n = 1;
  std::vector<Coords> points;
  unsigned m = 1;  // derivatives of weight < m
  DegreeDomain domain = DegreeDomain::kHomogeneous;
  unsigned degree = 0;
};

// Row (point a, derivative j) = a_index * Delta_{n,m-1} + j_index; column =
// basis monomial g of the chosen space; entry g^{(j)}(a).
GFpMatrix eval_matrix(const EvalMapSpec& spec);

struct DecodingMatrix {
  Line line;
  unsigned k = 0;
  unsigned m = 0;
  // Delta_{n,k-1} x p^n Delta_{n,m-1}; columns (x, j) = point_index(x) *
  // Delta_{n,m-1} + j_index.
  GFpMatrix matrix;
};

// m defaults to 2k - k/p. Requires p | k. Throws NotFactorable (naming the
// line and k) if the evaluation at the direction is not a function of the
// evaluations along the line.
DecodingMatrix decoding_matrix(const Line& line, const RingSpec& spec,
                               unsigned k,
                               std::optional<unsigned> m = std::nullopt);

// EVAL^k at the direction vector b on homogeneous forms of degree kp-1.
GFpMatrix direction_eval_matrix(const Coords& b, std::uint32_t p, unsigned n,
                                unsigned k);

}  // namespace kakeya
