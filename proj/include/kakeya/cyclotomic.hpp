#pragma once

// Exact arithmetic in Q(gamma), gamma a primitive p^k-th root of unity, and
// exact ranks over that field and over Q.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "kakeya/gfp_matrix.hpp"
#include "kakeya/ring.hpp"

namespace kakeya {

// Coefficients (constant term first) of the minimal polynomial of a primitive
// p^k-th root of unity: 1 + x^{p^{k-1}} + ... + x^{(p-1)p^{k-1}}.
std::vector<mpz_class> minimal_polynomial(std::uint64_t p, unsigned k);

class CycloField {
 public:
  CycloField(std::uint64_t p, unsigned k);

  std::uint64_t p() const { return p_; }
  unsigned k() const { return k_; }
  std::uint64_t order() const { return order_; }   // p^k
  std::size_t degree() const { return degree_; }   // phi(p^k)
  std::uint64_t stride() const { return stride_; } // p^{k-1}

  bool operator==(const CycloField& o) const {
    return p_ == o.p_ && k_ == o.k_;
  }

 private:
  std::uint64_t p_;
  unsigned k_;
  std::uint64_t order_;
  std::size_t degree_;
  std::uint64_t stride_;
};

// Element of Q(gamma) as a polynomial in gamma of degree < phi(p^k).
class CycloElement {
 public:
  explicit CycloElement(const CycloField& field);
  CycloElement(const CycloField& field, const mpq_class& constant);

  // gamma^e, exponent taken mod p^k.
  static CycloElement gamma_power(const CycloField& field, std::int64_t e);

  const CycloField& field() const { return field_; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  CycloElement& operator+=(const CycloElement& o);
  CycloElement& operator-=(const CycloElement& o);
  CycloElement& operator*=(const CycloElement& o);
  CycloElement& operator*=(const mpq_class& s);
  CycloElement operator-() const;
  // Throws InvalidArgument on zero.
  CycloElement inverse() const;

  bool operator==(const CycloElement& o) const;
  std::string to_string() const;

 private:
  // Reduces an arbitrary-length coefficient vector mod the minimal polynomial.
  void assign_reduced(std::vector<mpq_class> raw);

  CycloField field_;
  std::vector<mpq_class> coeffs_;
};

CycloElement operator+(CycloElement a, const CycloElement& b);
CycloElement operator-(CycloElement a, const CycloElement& b);
CycloElement operator*(CycloElement a, const CycloElement& b);
CycloElement operator/(const CycloElement& a, const CycloElement& b);

class CycloMatrix {
 public:
  CycloMatrix(const CycloField& field, std::size_t rows, std::size_t cols);

  const CycloField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const CycloElement& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  CycloElement& at(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  // 0/1 (or small integer) matrix lifted into Q(gamma).
  static CycloMatrix from_integers(const CycloField& field,
                                   const GFpMatrix& zero_one);
  // Entry (r,c) = gamma^{exps[r][c]}, or 0 where the exponent is negative.
  static CycloMatrix from_gamma_exponents(
      const CycloField& field,
      const std::vector<std::vector<std::int64_t>>& exps);

 private:
  CycloField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<CycloElement> data_;
};

CycloMatrix operator*(const CycloMatrix& a, const CycloMatrix& b);

// Rank over Q(gamma) by fraction-free (Bareiss) elimination.
std::size_t cyclo_rank(const CycloMatrix& m);

// 1 where the entry is non-zero, 0 elsewhere, over F_p.
GFpMatrix zero_pattern(const CycloMatrix& m);

// If x = gamma^e for some 0 <= e < p^k, returns e; otherwise -1.
std::int64_t gamma_exponent(const CycloElement& x);

struct RankTransfer {
  std::size_t cyclo_rank = 0;
  std::size_t pattern_rank = 0;
  bool holds = false;
};
// Checks rank over Q(gamma) >= rank over F_p of the zero pattern. Every entry
// must be zero or a power of gamma; otherwise InvalidArgument.
RankTransfer rank_transfer_check(const CycloMatrix& m);

// F_{i,j} = gamma^{<i,j>} over (Z/p^kZ)^n in point order.
CycloMatrix dft_matrix(const RingSpec& spec,
                       std::size_t guard = kDefaultCellGuard);

// Exact rank over Q of an integer matrix (Bareiss over Z).
std::size_t rational_rank(const std::vector<std::vector<mpz_class>>& m);
std::size_t rational_rank(const GFpMatrix& zero_one);

}  // namespace kakeya
