#pragma once

// Dense exact matrices over a prime field F_p.

#include <cstdint>
#include <span>
#include <vector>

#include "kakeya/error.hpp"

namespace kakeya {

class GFpMatrix {
 public:
  using value_type = std::uint32_t;

  GFpMatrix() = default;
  // Zero matrix. `p` must be prime.
  GFpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);

  static GFpMatrix identity(std::uint32_t p, std::size_t n);
  static GFpMatrix ones(std::uint32_t p, std::size_t rows, std::size_t cols);
  // Entries are reduced into [0, p).
  static GFpMatrix from_rows(std::uint32_t p,
                             const std::vector<std::vector<std::int64_t>>& rows);
  // 1 x size indicator of the given column positions.
  static GFpMatrix indicator(std::uint32_t p, std::size_t size,
                             std::span<const std::uint64_t> support);

  std::uint32_t p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t cells() const { return rows_ * cols_; }

  value_type at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  // Stores v mod p.
  void set(std::size_t r, std::size_t c, std::int64_t v);
  std::span<const value_type> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<value_type> row_mut(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const value_type> data() const { return data_; }

  GFpMatrix transpose() const;
  GFpMatrix row_slice(std::size_t first, std::size_t count) const;
  // Columns reordered so that new column perm[c] holds old column c.
  GFpMatrix permute_columns(std::span<const std::uint64_t> perm) const;
  bool is_zero() const;

  bool operator==(const GFpMatrix& o) const = default;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

GFpMatrix operator*(const GFpMatrix& a, const GFpMatrix& b);
GFpMatrix operator+(const GFpMatrix& a, const GFpMatrix& b);
GFpMatrix operator-(const GFpMatrix& a, const GFpMatrix& b);

// Vertical concatenation; all members share p and cols.
GFpMatrix vstack(std::span<const GFpMatrix> blocks);

// Rank by Gaussian elimination, pivot = first non-zero entry in the current
// column at or below the current row. Uses a bit-packed kernel when p == 2.
std::size_t rank(const GFpMatrix& m);

// Indices of rows that each raise the rank when rows are inserted in order.
std::vector<std::size_t> independent_rows(const GFpMatrix& m);

// Row-reduced echelon form with the list of pivot columns.
struct Echelon {
  GFpMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};
Echelon row_echelon(const GFpMatrix& m);

// Entry ((r1,r2),(c1,c2)) = a(r1,c1) b(r2,c2); row index r1*rows(b)+r2.
GFpMatrix kron(const GFpMatrix& a, const GFpMatrix& b);

// Non-empty family of matrices sharing p and column count.
class MatrixFamily {
 public:
  explicit MatrixFamily(std::vector<GFpMatrix> members);
  std::span<const GFpMatrix> members() const { return members_; }
  std::uint32_t p() const { return members_.front().p(); }
  std::size_t cols() const { return members_.front().cols(); }
  GFpMatrix stacked() const { return vstack(members_); }

 private:
  std::vector<GFpMatrix> members_;
};

// Rank of the vertical concatenation of all members.
std::size_t crank(const MatrixFamily& family);

// Returns C with C*A = B. Throws NotFactorable naming the first row of B
// outside the row space of A. The product is re-checked before returning.
GFpMatrix solve_row_factor(const GFpMatrix& a, const GFpMatrix& b);

// Outcome of the dimension check for span{v_i (x) y : y in B_i}.
struct TensorFamilyCheck {
  std::size_t span_dim = 0;
  std::size_t n = 0;  // number of independent vectors v_i
  std::size_t k = 0;  // min_i dim span B_i
  bool holds = false;
};
// `vs` holds the v_i as rows; families[i] holds B_i as rows. Throws
// InvalidArgument if the rows of `vs` are dependent or counts mismatch.
TensorFamilyCheck tensor_family_rank_check(
    const GFpMatrix& vs, std::span<const GFpMatrix> families);

namespace detail {
std::size_t rank_generic(const GFpMatrix& m);
std::size_t rank_gf2_packed(const GFpMatrix& m);
}  // namespace detail

}  // namespace kakeya
