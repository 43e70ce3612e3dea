#include "stiefel/linalg.hpp"

#include <sstream>

namespace stiefel {
namespace {

void require_same_length(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DomainError("vector length mismatch");
}

// Pivot preference: lower is better; nullopt for zero entries.
std::optional<long> pivot_weight(const Scalar& x) {
  if (x.is_zero()) return std::nullopt;
  if (x.ring().kind() == RingKind::LocalizedAtP) return valuation(x).value();
  return 0;
}

RingDescriptor working_ring(const RingDescriptor& ring) {
  if (ring.kind() == RingKind::PadicTruncated) return RingDescriptor::localized(ring.prime());
  if (ring.kind() == RingKind::Integers) return RingDescriptor::rationals();
  return ring;
}

Matrix change_ring(const Matrix& m, const RingDescriptor& target) {
  Matrix out(target, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = Scalar::from_rational(target, m.at(i, j).to_rational());
  return out;
}

struct Echelon {
  Matrix reduced;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
};

// Gauss-Jordan elimination with least-valuation full pivoting. Requires a
// ring in which division by a least-valuation pivot stays inside the ring.
Echelon eliminate(Matrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  for (;;) {
    std::optional<long> best;
    std::size_t br = 0, bc = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_used[j]) continue;
      for (std::size_t i = 0; i < rows; ++i) {
        if (row_used[i]) continue;
        auto w = pivot_weight(a.at(i, j));
        if (w && (!best || *w < *best)) {
          best = w;
          br = i;
          bc = j;
        }
      }
    }
    if (!best) break;
    const Scalar piv = a.at(br, bc);
    for (std::size_t j = 0; j < cols; ++j) {
      if (a.at(br, j).is_zero()) continue;
      auto q = a.at(br, j).divide(piv);
      if (!q) throw DomainError("elimination left the ring");
      a.at(br, j) = *q;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == br || a.at(i, bc).is_zero()) continue;
      const Scalar f = a.at(i, bc);
      for (std::size_t j = 0; j < cols; ++j)
        if (!a.at(br, j).is_zero()) a.at(i, j) -= f * a.at(br, j);
    }
    row_used[br] = 1;
    col_used[bc] = 1;
    pivots.emplace_back(br, bc);
  }
  return Echelon{std::move(a), std::move(pivots)};
}

mpz_class gcd_of_numerators(const Vector& v) {
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class n = x.to_rational().get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  return g;
}

mpz_class lcm_of_denominators(const Vector& v) {
  mpz_class l = 1;
  for (const auto& x : v) {
    mpz_class d = x.to_rational().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

}  // namespace

Vector make_vector(const RingDescriptor& ring, std::initializer_list<long> entries) {
  Vector v;
  v.reserve(entries.size());
  for (long e : entries) v.emplace_back(ring, e);
  return v;
}

Vector make_vector(const RingDescriptor& ring, const std::vector<long>& entries) {
  Vector v;
  v.reserve(entries.size());
  for (long e : entries) v.emplace_back(ring, e);
  return v;
}

Vector zero_vector(const RingDescriptor& ring, std::size_t n) { return Vector(n, Scalar::zero(ring)); }

Vector basis_vector(const RingDescriptor& ring, std::size_t n, std::size_t i) {
  Vector v = zero_vector(ring, n);
  v.at(i) = Scalar::one(ring);
  return v;
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_length(a, b);
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_length(a, b);
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector operator-(const Vector& a) {
  Vector out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(-x);
  return out;
}

Vector operator*(const Scalar& c, const Vector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(c * x);
  return out;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

bool is_primitive(const Vector& v) {
  for (const auto& x : v)
    if (x.is_unit()) return true;
  return false;
}

std::string to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].to_string();
  }
  return s + ")";
}

Vector normalize_direction(const Vector& v) {
  if (v.empty() || is_zero(v)) return v;
  const RingDescriptor& ring = v[0].ring();
  switch (ring.kind()) {
    case RingKind::FiniteField:
    case RingKind::PadicTruncated:
      for (const auto& x : v)
        if (x.is_unit()) return x.inverse() * v;
      return v;
    case RingKind::Rationals:
    case RingKind::LocalizedAtP:
    case RingKind::Integers: {
      mpz_class content = gcd_of_numerators(v);
      if (ring.kind() == RingKind::LocalizedAtP) {
        const mpz_class p(static_cast<unsigned long>(ring.prime()));
        while (mpz_divisible_p(content.get_mpz_t(), p.get_mpz_t()) != 0) content /= p;
      }
      mpq_class factor(lcm_of_denominators(v), content);
      factor.canonicalize();
      for (const auto& x : v) {
        if (x.is_zero()) continue;
        if (sgn(x.to_rational()) < 0) factor = -factor;
        break;
      }
      return Scalar::from_rational(ring, factor) * v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(const RingDescriptor& ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring)) {}

Matrix Matrix::identity(const RingDescriptor& ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::from_rows(const RingDescriptor& ring, const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  Matrix m(ring, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DomainError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Scalar(ring, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(const RingDescriptor& ring, std::size_t rows, const std::vector<Vector>& columns) {
  Matrix m(ring, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw DomainError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = columns[j][i];
  }
  return m;
}

Matrix Matrix::diagonal(const std::vector<Scalar>& entries) {
  if (entries.empty()) throw DomainError("diagonal matrix needs a ring; use the (ring, 0, 0) constructor");
  Matrix m(entries[0].ring(), entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = entries[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector size mismatch");
  Vector out = zero_vector(ring_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!v[j].is_zero()) out[i] += at(i, j) * v[j];
  return out;
}

bool Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!(at(i, j) == at(j, i))) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product size mismatch");
  if (!(a.ring_ == b.ring_)) throw DomainError("ring mismatch in matrix product");
  Matrix out(a.ring_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b.at(k, j).is_zero()) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ",";
      s += at(i, j).to_string();
    }
  }
  return s + "]";
}

Scalar dot(const Vector& a, const Vector& b) {
  require_same_length(a, b);
  if (a.empty()) throw DomainError("dot product of empty vectors has no ring");
  Scalar s = Scalar::zero(a[0].ring());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

Scalar determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  const RingDescriptor& ring = m.ring();
  if (n == 0) return Scalar::one(ring);
  if (ring.is_finite()) {
    // Bareiss on the canonical integer lifts.
    std::vector<mpz_class> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m.at(i, j).to_rational().get_num();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a[k * n + k] == 0) {
        std::size_t s = k + 1;
        while (s < n && a[s * n + k] == 0) ++s;
        if (s == n) return Scalar::zero(ring);
        for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[s * n + j]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) {
          a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]);
          mpz_divexact(a[i * n + j].get_mpz_t(), a[i * n + j].get_mpz_t(), prev.get_mpz_t());
        }
      prev = a[k * n + k];
    }
    return Scalar(ring, mpz_class(sign * a[n * n - 1]));
  }
  std::vector<mpq_class> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m.at(i, j).to_rational();
  mpq_class det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t s = k;
    while (s < n && sgn(a[s * n + k]) == 0) ++s;
    if (s == n) return Scalar::zero(ring);
    if (s != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[s * n + j]);
      det = -det;
    }
    det *= a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a[i * n + k]) == 0) continue;
      const mpq_class f = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return Scalar::from_rational(ring, det);
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const RingDescriptor& ring = m.ring();
  if (ring.kind() == RingKind::Integers) {
    if (!determinant(m).is_unit()) return std::nullopt;
    auto inv = inverse(change_ring(m, RingDescriptor::rationals()));
    return change_ring(*inv, ring);
  }
  Matrix a = m;
  Matrix inv = Matrix::identity(ring, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t s = k;
    while (s < n && !a.at(s, k).is_unit()) ++s;
    if (s == n) return std::nullopt;
    if (s != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.at(k, j), a.at(s, j));
        std::swap(inv.at(k, j), inv.at(s, j));
      }
    const Scalar pinv = a.at(k, k).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a.at(k, j) *= pinv;
      inv.at(k, j) *= pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a.at(i, k).is_zero()) continue;
      const Scalar f = a.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) -= f * a.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const RingDescriptor& ring = m.ring();
  const RingDescriptor work = working_ring(ring);
  if (ring.kind() == RingKind::Integers) throw DomainError("kernel_basis is not supported over Z");
  Echelon e = eliminate(work == ring ? m : change_ring(m, work));
  std::vector<char> is_pivot_col(m.cols(), 0);
  for (auto [r, c] : e.pivots) is_pivot_col[c] = 1;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot_col[f]) continue;
    Vector x = zero_vector(work, m.cols());
    x[f] = Scalar::one(work);
    for (auto [r, c] : e.pivots) x[c] = -e.reduced.at(r, f);
    if (!(work == ring)) {
      Vector y;
      y.reserve(x.size());
      for (const auto& s : x) y.push_back(Scalar::from_rational(ring, s.to_rational()));
      x = std::move(y);
    }
    basis.push_back(normalize_direction(x));
  }
  return basis;
}

std::size_t rank(const Matrix& m) {
  const RingDescriptor& ring = m.ring();
  const RingDescriptor work = ring.is_field() ? ring : RingDescriptor::rationals();
  return eliminate(work == ring ? m : change_ring(m, work)).pivots.size();
}

}  // namespace stiefel
