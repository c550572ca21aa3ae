#include "kakeya/gfp_matrix.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "kakeya/ring.hpp"

namespace kakeya {

namespace {

using Word = std::uint64_t;

void require_same_p(const GFpMatrix& a, const GFpMatrix& b, const char* what) {
  if (a.p() != b.p()) {
    throw InvalidArgument(std::string(what) + ": characteristic mismatch (" +
                          std::to_string(a.p()) + " vs " +
                          std::to_string(b.p()) + ")");
  }
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(mod_inverse(a, p));
}

// In-place reduced row echelon form of a rows x cols row-major block. Pivots
// are searched only in columns [0, pivot_limit). Returns the pivot columns.
std::vector<std::size_t> rref_inplace(std::vector<std::uint32_t>& d,
                                      std::size_t rows, std::size_t cols,
                                      std::size_t pivot_limit,
                                      std::uint32_t p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (d[i * cols + c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(d.begin() + static_cast<std::ptrdiff_t>(piv * cols),
                       d.begin() + static_cast<std::ptrdiff_t>((piv + 1) * cols),
                       d.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    std::uint32_t* pr = d.data() + r * cols;
    const std::uint64_t inv = inv_mod(pr[c], p);
    for (std::size_t j = c; j < cols; ++j) {
      pr[j] = static_cast<std::uint32_t>(pr[j] * inv % p);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      std::uint32_t* pi = d.data() + i * cols;
      const std::uint64_t f = pi[c];
      if (f == 0) continue;
      const std::uint64_t neg = p - f;
      for (std::size_t j = c; j < cols; ++j) {
        if (pr[j] != 0) {
          pi[j] = static_cast<std::uint32_t>((pi[j] + neg * pr[j]) % p);
        }
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

GFpMatrix::GFpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols) {
  if (!is_prime(p)) {
    throw InvalidArgument("characteristic " + std::to_string(p) +
                          " is not prime");
  }
  if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols) {
    throw GuardExceeded("matrix extents overflow");
  }
  data_.assign(rows * cols, 0);
}

GFpMatrix GFpMatrix::identity(std::uint32_t p, std::size_t n) {
  GFpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

GFpMatrix GFpMatrix::ones(std::uint32_t p, std::size_t rows,
                          std::size_t cols) {
  GFpMatrix m(p, rows, cols);
  std::fill(m.data_.begin(), m.data_.end(), 1);
  return m;
}

GFpMatrix GFpMatrix::from_rows(
    std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  GFpMatrix m(p, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InvalidArgument("ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

GFpMatrix GFpMatrix::indicator(std::uint32_t p, std::size_t size,
                               std::span<const std::uint64_t> support) {
  GFpMatrix m(p, 1, size);
  for (std::uint64_t i : support) {
    if (i >= size) throw InvalidArgument("indicator position out of range");
    m.data_[i] = 1;
  }
  return m;
}

void GFpMatrix::set(std::size_t r, std::size_t c, std::int64_t v) {
  std::int64_t x = v % static_cast<std::int64_t>(p_);
  if (x < 0) x += p_;
  data_.at(r * cols_ + c) = static_cast<value_type>(x);
}

GFpMatrix GFpMatrix::transpose() const {
  GFpMatrix t(p_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      t.data_[c * rows_ + r] = data_[r * cols_ + c];
    }
  }
  return t;
}

GFpMatrix GFpMatrix::row_slice(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw InvalidArgument("row slice out of range");
  GFpMatrix s(p_, count, cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              count * cols_, s.data_.begin());
  return s;
}

GFpMatrix GFpMatrix::permute_columns(
    std::span<const std::uint64_t> perm) const {
  if (perm.size() != cols_) throw InvalidArgument("permutation size mismatch");
  GFpMatrix out(p_, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out.data_[r * cols_ + perm[c]] = data_[r * cols_ + c];
    }
  }
  return out;
}

bool GFpMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](value_type v) { return v == 0; });
}

GFpMatrix operator*(const GFpMatrix& a, const GFpMatrix& b) {
  require_same_p(a, b, "product");
  if (a.cols() != b.rows()) throw InvalidArgument("product: inner extents");
  const std::uint64_t p = a.p();
  // Number of products that can be accumulated before reducing.
  const std::uint64_t step = (p - 1) * (p - 1);
  const std::uint64_t batch =
      step == 0 ? std::numeric_limits<std::uint64_t>::max()
                : (std::numeric_limits<std::uint64_t>::max() - p) / step;
  GFpMatrix out(a.p(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t pending = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t f = a.at(i, k);
      if (f == 0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < brow.size(); ++j) acc[j] += f * brow[j];
      if (++pending == batch) {
        for (auto& x : acc) x %= p;
        pending = 0;
      }
    }
    auto orow = out.row_mut(i);
    for (std::size_t j = 0; j < acc.size(); ++j) {
      orow[j] = static_cast<std::uint32_t>(acc[j] % p);
    }
  }
  return out;
}

GFpMatrix operator+(const GFpMatrix& a, const GFpMatrix& b) {
  require_same_p(a, b, "sum");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("sum: extents differ");
  }
  GFpMatrix out(a.p(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      out.set(r, c, static_cast<std::int64_t>(a.at(r, c)) + b.at(r, c));
    }
  }
  return out;
}

GFpMatrix operator-(const GFpMatrix& a, const GFpMatrix& b) {
  require_same_p(a, b, "difference");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("difference: extents differ");
  }
  GFpMatrix out(a.p(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      out.set(r, c, static_cast<std::int64_t>(a.at(r, c)) - b.at(r, c));
    }
  }
  return out;
}

GFpMatrix vstack(std::span<const GFpMatrix> blocks) {
  if (blocks.empty()) throw InvalidArgument("vstack of nothing");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    require_same_p(blocks.front(), b, "vstack");
    if (b.cols() != blocks.front().cols()) {
      throw InvalidArgument("vstack: column counts differ");
    }
    rows += b.rows();
  }
  GFpMatrix out(blocks.front().p(), rows, blocks.front().cols());
  std::size_t r = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i, ++r) {
      std::copy(b.row(i).begin(), b.row(i).end(), out.row_mut(r).begin());
    }
  }
  return out;
}

namespace detail {

std::size_t rank_generic(const GFpMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::uint64_t p = m.p();
  std::vector<std::uint32_t> d(m.data().begin(), m.data().end());
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (d[i * cols + c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(d.begin() + static_cast<std::ptrdiff_t>(piv * cols),
                       d.begin() + static_cast<std::ptrdiff_t>((piv + 1) * cols),
                       d.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    std::uint32_t* pr = d.data() + r * cols;
    const std::uint64_t inv = inv_mod(pr[c], static_cast<std::uint32_t>(p));
    for (std::size_t j = c; j < cols; ++j) {
      pr[j] = static_cast<std::uint32_t>(pr[j] * inv % p);
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      std::uint32_t* pi = d.data() + i * cols;
      const std::uint64_t f = pi[c];
      if (f == 0) continue;
      const std::uint64_t neg = p - f;
      for (std::size_t j = c; j < cols; ++j) {
        if (pr[j] != 0) {
          pi[j] = static_cast<std::uint32_t>((pi[j] + neg * pr[j]) % p);
        }
      }
    }
    ++r;
  }
  return r;
}

std::size_t rank_gf2_packed(const GFpMatrix& m) {
  if (m.p() != 2) throw InvalidArgument("packed kernel requires p = 2");
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t words = (cols + 63) / 64;
  std::vector<Word> d(rows * words, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (m.at(r, c)) d[r * words + c / 64] |= Word{1} << (c % 64);
    }
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    const std::size_t w = c / 64;
    const Word bit = Word{1} << (c % 64);
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (d[i * words + w] & bit) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t k = w; k < words; ++k) {
        std::swap(d[piv * words + k], d[r * words + k]);
      }
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (d[i * words + w] & bit) {
        for (std::size_t k = w; k < words; ++k) {
          d[i * words + k] ^= d[r * words + k];
        }
      }
    }
    ++r;
  }
  return r;
}

}  // namespace detail

std::size_t rank(const GFpMatrix& m) {
  if (m.p() == 2) return detail::rank_gf2_packed(m);
  return detail::rank_generic(m);
}

std::vector<std::size_t> independent_rows(const GFpMatrix& m) {
  const std::uint64_t p = m.p();
  const std::size_t cols = m.cols();
  std::vector<std::vector<std::uint32_t>> basis;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> picked;
  std::vector<std::uint32_t> v(cols);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), v.begin());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::uint64_t f = v[pivots[b]];
      if (f == 0) continue;
      const std::uint64_t neg = p - f;
      for (std::size_t j = 0; j < cols; ++j) {
        if (basis[b][j] != 0) {
          v[j] = static_cast<std::uint32_t>((v[j] + neg * basis[b][j]) % p);
        }
      }
    }
    const auto it = std::find_if(v.begin(), v.end(),
                                 [](std::uint32_t x) { return x != 0; });
    if (it == v.end()) continue;
    const auto c = static_cast<std::size_t>(it - v.begin());
    const std::uint64_t inv = inv_mod(v[c], static_cast<std::uint32_t>(p));
    for (auto& x : v) x = static_cast<std::uint32_t>(x * inv % p);
    basis.push_back(v);
    pivots.push_back(c);
    picked.push_back(r);
  }
  return picked;
}

Echelon row_echelon(const GFpMatrix& m) {
  Echelon e;
  e.reduced = m;
  std::vector<std::uint32_t> d(m.data().begin(), m.data().end());
  e.pivot_cols = rref_inplace(d, m.rows(), m.cols(), m.cols(), m.p());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      e.reduced.set(r, c, d[r * m.cols() + c]);
    }
  }
  return e;
}

GFpMatrix kron(const GFpMatrix& a, const GFpMatrix& b) {
  require_same_p(a, b, "kron");
  const std::uint64_t p = a.p();
  GFpMatrix out(a.p(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t r1 = 0; r1 < a.rows(); ++r1) {
    for (std::size_t c1 = 0; c1 < a.cols(); ++c1) {
      const std::uint64_t x = a.at(r1, c1);
      if (x == 0) continue;
      for (std::size_t r2 = 0; r2 < b.rows(); ++r2) {
        auto orow = out.row_mut(r1 * b.rows() + r2);
        const auto brow = b.row(r2);
        for (std::size_t c2 = 0; c2 < b.cols(); ++c2) {
          orow[c1 * b.cols() + c2] =
              static_cast<std::uint32_t>(x * brow[c2] % p);
        }
      }
    }
  }
  return out;
}

MatrixFamily::MatrixFamily(std::vector<GFpMatrix> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("empty matrix family");
  for (const auto& m : members_) {
    require_same_p(members_.front(), m, "matrix family");
    if (m.cols() != members_.front().cols()) {
      throw InvalidArgument("matrix family: column counts differ");
    }
  }
}

std::size_t crank(const MatrixFamily& family) {
  return rank(family.stacked());
}

GFpMatrix solve_row_factor(const GFpMatrix& a, const GFpMatrix& b) {
  require_same_p(a, b, "solve_row_factor");
  if (a.cols() != b.cols()) {
    throw InvalidArgument("solve_row_factor: column counts differ");
  }
  const std::uint64_t p = a.p();
  const std::size_t ra = a.rows(), w = a.cols();
  const std::size_t aug = w + ra;
  // [A | I] -> [E | T] with T*A = E in reduced echelon form.
  std::vector<std::uint32_t> d(ra * aug, 0);
  for (std::size_t r = 0; r < ra; ++r) {
    std::copy(a.row(r).begin(), a.row(r).end(), d.begin() +
              static_cast<std::ptrdiff_t>(r * aug));
    d[r * aug + w + r] = 1;
  }
  const auto pivots = rref_inplace(d, ra, aug, w, a.p());

  GFpMatrix c(a.p(), b.rows(), ra);
  std::vector<std::uint64_t> residual(w);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < w; ++j) residual[j] = b.at(i, j);
    auto crow = c.row_mut(i);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const std::uint64_t lambda = residual[pivots[k]];
      if (lambda == 0) continue;
      const std::uint32_t* er = d.data() + k * aug;
      const std::uint64_t neg = p - lambda;
      for (std::size_t j = 0; j < w; ++j) {
        residual[j] = (residual[j] + neg * er[j]) % p;
      }
      for (std::size_t j = 0; j < ra; ++j) {
        crow[j] = static_cast<std::uint32_t>((crow[j] + lambda * er[w + j]) % p);
      }
    }
    if (std::any_of(residual.begin(), residual.end(),
                    [](std::uint64_t x) { return x != 0; })) {
      throw NotFactorable("not factorable: row " + std::to_string(i) +
                              " of B is outside the row space of A",
                          i);
    }
  }
  if (!(c * a == b)) {
    throw AssertionFailure("solve_row_factor: C*A != B after construction");
  }
  return c;
}

TensorFamilyCheck tensor_family_rank_check(
    const GFpMatrix& vs, std::span<const GFpMatrix> families) {
  if (families.size() != vs.rows()) {
    throw InvalidArgument("tensor check: need one family per vector");
  }
  if (rank(vs) != vs.rows()) {
    throw InvalidArgument("tensor check: vectors are linearly dependent");
  }
  TensorFamilyCheck out;
  out.n = vs.rows();
  out.k = std::numeric_limits<std::size_t>::max();
  std::vector<GFpMatrix> blocks;
  for (std::size_t i = 0; i < families.size(); ++i) {
    require_same_p(vs, families[i], "tensor check");
    out.k = std::min(out.k, rank(families[i]));
    blocks.push_back(kron(vs.row_slice(i, 1), families[i]));
  }
  out.span_dim = rank(vstack(blocks));
  out.holds = out.span_dim >= out.n * out.k;
  return out;
}

}  // namespace kakeya
