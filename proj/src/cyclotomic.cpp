#include "kakeya/cyclotomic.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace kakeya {

namespace {

using QPoly = std::vector<mpq_class>;  // constant term first

void trim(QPoly& a) {
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

// a = q*b + r with deg r < deg b; b non-zero and trimmed.
std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  QPoly q(a.size() - b.size() + 1);
  const mpq_class lead = b.back();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const std::size_t shift = i - (b.size() - 1);
    const mpq_class f = a[i] / lead;
    q[shift] = f;
    if (sgn(f) != 0) {
      for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    }
    if (i == 0) break;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

}  // namespace

std::vector<mpz_class> minimal_polynomial(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) {
    throw InvalidArgument("minimal_polynomial: " + std::to_string(p) +
                          " is not prime");
  }
  if (k < 1) throw InvalidArgument("minimal_polynomial: k must be >= 1");
  const std::uint64_t stride = ipow(p, k - 1);
  std::vector<mpz_class> m((p - 1) * stride + 1, 0);
  for (std::uint64_t i = 0; i < p; ++i) m[i * stride] = 1;
  return m;
}

CycloField::CycloField(std::uint64_t p, unsigned k) : p_(p), k_(k) {
  if (!is_prime(p)) {
    throw InvalidArgument("cyclotomic field: " + std::to_string(p) +
                          " is not prime");
  }
  if (k < 1) throw InvalidArgument("cyclotomic field: k must be >= 1");
  order_ = ipow(p, k);
  stride_ = order_ / p;
  degree_ = static_cast<std::size_t>(order_ - stride_);
}

CycloElement::CycloElement(const CycloField& field)
    : field_(field), coeffs_(field.degree()) {}

CycloElement::CycloElement(const CycloField& field, const mpq_class& constant)
    : field_(field), coeffs_(field.degree()) {
  coeffs_[0] = constant;
}

void CycloElement::assign_reduced(std::vector<mpq_class> raw) {
  const std::size_t deg = field_.degree();
  const std::size_t stride = field_.stride();
  const std::size_t terms = field_.p() - 1;
  // x^deg = -(1 + x^s + ... + x^{(p-2)s}); fold from the top down.
  for (std::size_t e = raw.size(); e-- > deg;) {
    if (sgn(raw[e]) == 0) continue;
    const mpq_class c = raw[e];
    raw[e] = 0;
    const std::size_t base = e - deg;
    for (std::size_t i = 0; i < terms; ++i) raw[base + i * stride] -= c;
  }
  raw.resize(deg);
  coeffs_ = std::move(raw);
}

CycloElement CycloElement::gamma_power(const CycloField& field,
                                       std::int64_t e) {
  const auto ord = static_cast<std::int64_t>(field.order());
  std::int64_t r = e % ord;
  if (r < 0) r += ord;
  CycloElement x(field);
  std::vector<mpq_class> raw(std::max<std::size_t>(
      field.degree(), static_cast<std::size_t>(r) + 1));
  raw[static_cast<std::size_t>(r)] = 1;
  x.assign_reduced(std::move(raw));
  return x;
}

bool CycloElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const mpq_class& c) { return sgn(c) == 0; });
}

CycloElement& CycloElement::operator+=(const CycloElement& o) {
  if (!(field_ == o.field_)) throw InvalidArgument("field mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycloElement& CycloElement::operator-=(const CycloElement& o) {
  if (!(field_ == o.field_)) throw InvalidArgument("field mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycloElement& CycloElement::operator*=(const CycloElement& o) {
  if (!(field_ == o.field_)) throw InvalidArgument("field mismatch");
  const std::size_t deg = field_.degree();
  std::vector<mpq_class> raw(2 * deg - 1);
  for (std::size_t i = 0; i < deg; ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < deg; ++j) {
      if (sgn(o.coeffs_[j]) == 0) continue;
      raw[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  assign_reduced(std::move(raw));
  return *this;
}

CycloElement& CycloElement::operator*=(const mpq_class& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

CycloElement CycloElement::operator-() const {
  CycloElement r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycloElement CycloElement::inverse() const {
  if (is_zero()) throw InvalidArgument("inverse of zero in Q(gamma)");
  QPoly m;
  for (const auto& c : minimal_polynomial(field_.p(), field_.k())) {
    m.emplace_back(c);
  }
  QPoly a(coeffs_.begin(), coeffs_.end());
  trim(a);
  // Extended Euclid: track s with s*a = r (mod m).
  QPoly r0 = m, r1 = a, s0{}, s1{mpq_class(1)};
  while (!r1.empty()) {
    auto [q, rem] = poly_divmod(r0, r1);
    QPoly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // m is irreducible, so the gcd r0 is a non-zero constant.
  const mpq_class g = r0.at(0);
  std::vector<mpq_class> raw(std::max(s0.size(), field_.degree()));
  for (std::size_t i = 0; i < s0.size(); ++i) raw[i] = s0[i] / g;
  CycloElement inv(field_);
  inv.assign_reduced(std::move(raw));
  return inv;
}

bool CycloElement::operator==(const CycloElement& o) const {
  return field_ == o.field_ && coeffs_ == o.coeffs_;
}

std::string CycloElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[i];
    if (i > 0) os << "*g^" << i;
  }
  if (first) os << "0";
  return os.str();
}

CycloElement operator+(CycloElement a, const CycloElement& b) { return a += b; }
CycloElement operator-(CycloElement a, const CycloElement& b) { return a -= b; }
CycloElement operator*(CycloElement a, const CycloElement& b) { return a *= b; }
CycloElement operator/(const CycloElement& a, const CycloElement& b) {
  return a * b.inverse();
}

CycloMatrix::CycloMatrix(const CycloField& field, std::size_t rows,
                         std::size_t cols)
    : field_(field),
      rows_(rows),
      cols_(cols),
      data_(rows * cols, CycloElement(field)) {}

CycloMatrix CycloMatrix::from_integers(const CycloField& field,
                                       const GFpMatrix& zero_one) {
  CycloMatrix m(field, zero_one.rows(), zero_one.cols());
  for (std::size_t r = 0; r < m.rows_; ++r) {
    for (std::size_t c = 0; c < m.cols_; ++c) {
      if (zero_one.at(r, c) != 0) {
        m.at(r, c) = CycloElement(field, mpq_class(zero_one.at(r, c)));
      }
    }
  }
  return m;
}

CycloMatrix CycloMatrix::from_gamma_exponents(
    const CycloField& field,
    const std::vector<std::vector<std::int64_t>>& exps) {
  const std::size_t cols = exps.empty() ? 0 : exps.front().size();
  CycloMatrix m(field, exps.size(), cols);
  for (std::size_t r = 0; r < exps.size(); ++r) {
    if (exps[r].size() != cols) throw InvalidArgument("ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (exps[r][c] >= 0) {
        m.at(r, c) = CycloElement::gamma_power(field, exps[r][c]);
      }
    }
  }
  return m;
}

CycloMatrix operator*(const CycloMatrix& a, const CycloMatrix& b) {
  if (!(a.field() == b.field())) throw InvalidArgument("field mismatch");
  if (a.cols() != b.rows()) throw InvalidArgument("product: inner extents");
  CycloMatrix out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const CycloElement& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out.at(i, j) += x * b.at(k, j);
      }
    }
  }
  return out;
}

std::size_t cyclo_rank(const CycloMatrix& input) {
  CycloMatrix m = input;
  const std::size_t rows = m.rows(), cols = m.cols();
  CycloElement prev_inv(m.field(), mpq_class(1));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (!m.at(i, c).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    }
    const CycloElement pivot = m.at(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const CycloElement lead = m.at(i, c);
      for (std::size_t j = c + 1; j < cols; ++j) {
        CycloElement v = pivot * m.at(i, j);
        if (!lead.is_zero() && !m.at(r, j).is_zero()) v -= lead * m.at(r, j);
        m.at(i, j) = v * prev_inv;
      }
      m.at(i, c) = CycloElement(m.field());
    }
    prev_inv = pivot.inverse();
    ++r;
  }
  return r;
}

GFpMatrix zero_pattern(const CycloMatrix& m) {
  GFpMatrix out(static_cast<std::uint32_t>(m.field().p()), m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m.at(r, c).is_zero()) out.set(r, c, 1);
    }
  }
  return out;
}

namespace {

std::vector<CycloElement> gamma_powers(const CycloField& field) {
  std::vector<CycloElement> pw;
  pw.reserve(field.order());
  for (std::uint64_t e = 0; e < field.order(); ++e) {
    pw.push_back(CycloElement::gamma_power(field, static_cast<std::int64_t>(e)));
  }
  return pw;
}

std::int64_t find_power(const std::vector<CycloElement>& pw,
                        const CycloElement& x) {
  for (std::size_t e = 0; e < pw.size(); ++e) {
    if (pw[e] == x) return static_cast<std::int64_t>(e);
  }
  return -1;
}

}  // namespace

std::int64_t gamma_exponent(const CycloElement& x) {
  return find_power(gamma_powers(x.field()), x);
}

RankTransfer rank_transfer_check(const CycloMatrix& m) {
  const auto pw = gamma_powers(m.field());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& x = m.at(r, c);
      if (!x.is_zero() && find_power(pw, x) < 0) {
        throw InvalidArgument("rank transfer: entry (" + std::to_string(r) +
                              "," + std::to_string(c) + ") = " +
                              x.to_string() +
                              " is neither zero nor a power of gamma");
      }
    }
  }
  RankTransfer out;
  out.cyclo_rank = cyclo_rank(m);
  out.pattern_rank = rank(zero_pattern(m));
  out.holds = out.cyclo_rank >= out.pattern_rank;
  return out;
}

CycloMatrix dft_matrix(const RingSpec& spec, std::size_t guard) {
  if (!spec.is_prime_power()) {
    throw InvalidArgument("dft_matrix requires a prime-power modulus");
  }
  const auto& f = spec.factors().front();
  const CycloField field(f.prime, f.exponent);
  const std::uint64_t size = spec.num_points();
  if (size > guard / std::max<std::uint64_t>(size, 1)) {
    throw GuardExceeded("dft_matrix: " + std::to_string(size) + "^2 cells");
  }
  const auto pw = gamma_powers(field);
  std::vector<Coords> pts;
  pts.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) pts.push_back(index_point(i, spec));
  CycloMatrix m(field, size, size);
  for (std::uint64_t i = 0; i < size; ++i) {
    for (std::uint64_t j = 0; j < size; ++j) {
      m.at(i, j) = pw[inner_product(pts[i], pts[j], spec.modulus())];
    }
  }
  return m;
}

std::size_t rational_rank(const std::vector<std::vector<mpz_class>>& input) {
  auto m = input;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (sgn(m[i][c]) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(),
                     prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

std::size_t rational_rank(const GFpMatrix& zero_one) {
  std::vector<std::vector<mpz_class>> m(
      zero_one.rows(), std::vector<mpz_class>(zero_one.cols()));
  for (std::size_t r = 0; r < zero_one.rows(); ++r) {
    for (std::size_t c = 0; c < zero_one.cols(); ++c) {
      m[r][c] = zero_one.at(r, c);
    }
  }
  return rational_rank(m);
}

}  // namespace kakeya
