#include "stiefel/fp.hpp"

#include <algorithm>
#include <string>

namespace stiefel::fp {

Field::Field(std::uint32_t p) : p_(p), inv_(p, 0), square_(p, 0) {
  if (p < 3 || p > kernels::kMaxModulus || !is_prime(p))
    throw DomainError("fp::Field needs an odd prime <= " + std::to_string(kernels::kMaxModulus));
  for (std::uint32_t a = 1; a < p; ++a)
    for (std::uint32_t b = 1; b < p; ++b)
      if (a * b % p == 1) inv_[a] = b;
  for (std::uint32_t a = 0; a < p; ++a) square_[a * a % p] = 1;
}

Field::Elem Field::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero in F_p");
  return inv_[a];
}

Field::Elem Field::from_long(long v) const {
  long r = v % static_cast<long>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

Form::Form(Field field, std::size_t dim, std::vector<std::uint32_t> gram)
    : field_(std::move(field)), dim_(dim), gram_(std::move(gram)) {
  if (gram_.size() != dim_ * dim_) throw DomainError("fp::Form: Gram size mismatch");
  if (dim_ > kernels::kMaxDim) throw DomainError("fp::Form: dimension too large");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      if (gram_[i * dim_ + j] >= field_.p()) throw DomainError("fp::Form: Gram entry not reduced");
      if (gram_[i * dim_ + j] != gram_[j * dim_ + i]) throw DomainError("fp::Form: Gram matrix not symmetric");
    }
}

Form Form::from_module(const QuadraticModule& q) {
  if (q.ring().kind() != RingKind::FiniteField) throw DomainError("fp::Form needs a module over a finite field");
  if (q.ring().prime() > kernels::kMaxModulus) throw DomainError("fp::Form: field too large for word kernels");
  Field f(static_cast<std::uint32_t>(q.ring().prime()));
  std::vector<std::uint32_t> g(q.rank() * q.rank());
  for (std::size_t i = 0; i < q.rank(); ++i)
    for (std::size_t j = 0; j < q.rank(); ++j)
      g[i * q.rank() + j] = static_cast<std::uint32_t>(q.gram().at(i, j).residue_value());
  return Form(f, q.rank(), std::move(g));
}

Form Form::euclidean(const Field& field, std::size_t dim) {
  std::vector<std::uint32_t> g(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) g[i * dim + i] = 1;
  return Form(field, dim, std::move(g));
}

QuadraticModule Form::to_module() const { return QuadraticModule(to_matrix(field_, gram_, dim_)); }

std::uint32_t Form::value(const std::uint32_t* x) const { return gram_product(x, x); }

std::uint32_t Form::gram_product(const std::uint32_t* x, const std::uint32_t* y) const {
  const std::uint32_t p = field_.p();
  std::uint32_t total = 0;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (x[j] == 0) continue;
    std::uint32_t row = 0;
    for (std::size_t k = 0; k < dim_; ++k) row += gram_[j * dim_ + k] * y[k];
    total = (total + x[j] * (row % p)) % p;
  }
  return total;
}

void Form::times_gram(const std::uint32_t* x, std::uint32_t* out) const {
  for (std::size_t j = 0; j < dim_; ++j) {
    std::uint32_t row = 0;
    for (std::size_t k = 0; k < dim_; ++k) row += gram_[j * dim_ + k] * x[k];
    out[j] = row % field_.p();
  }
}

void VectorTable::push(const std::uint32_t* x) {
  data_.insert(data_.end(), x, x + dim_);
  ++count_;
}

std::vector<std::uint32_t> VectorTable::coordinate_major() const {
  const std::size_t n = size();
  std::vector<std::uint32_t> soa(n * dim_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim_; ++j) soa[j * n + i] = data_[i * dim_ + j];
  return soa;
}

std::optional<std::size_t> VectorTable::find_sorted(const std::uint32_t* x) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const std::uint32_t* m = (*this)[mid];
    if (std::lexicographical_compare(m, m + dim_, x, x + dim_))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(x, x + dim_, (*this)[lo])) return lo;
  return std::nullopt;
}

Vector VectorTable::to_vector(std::size_t i, const RingDescriptor& ring) const {
  Vector v;
  v.reserve(dim_);
  for (std::size_t j = 0; j < dim_; ++j) v.emplace_back(ring, static_cast<long>((*this)[i][j]));
  return v;
}

void sweep(const Form& q, const BlockVisitor& visit, kernels::Backend backend, std::uint64_t cap) {
  const std::size_t n = q.dim();
  const std::uint32_t p = q.field().p();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / p) throw BudgetError("sweep: p^n exceeds the enumeration cap");
    total *= p;
  }
  constexpr std::size_t kBlock = 4096;
  std::vector<std::uint32_t> soa(std::max<std::size_t>(n, 1) * kBlock);
  std::vector<std::uint32_t> values(kBlock);
  std::vector<std::uint32_t> digits(n, 0);
  std::uint64_t index = 0;
  while (index < total) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total - index));
    for (std::size_t b = 0; b < count; ++b) {
      for (std::size_t j = 0; j < n; ++j) soa[j * kBlock + b] = digits[j];
      for (std::size_t j = n; j-- > 0;) {
        if (++digits[j] < p) break;
        digits[j] = 0;
      }
    }
    kernels::quadratic_form_mod(backend, soa.data(), kBlock, count, n, q.gram().data(), p, values.data());
    if (visit(soa.data(), kBlock, count, values.data(), index)) return;
    index += count;
  }
}

VectorTable vectors_with_value(const Form& q, std::uint32_t value, kernels::Backend backend) {
  VectorTable table(q.dim());
  std::vector<std::uint32_t> x(q.dim());
  sweep(
      q,
      [&](const std::uint32_t* soa, std::size_t stride, std::size_t count, const std::uint32_t* values, std::uint64_t) {
        for (std::size_t b = 0; b < count; ++b) {
          if (values[b] != value) continue;
          for (std::size_t j = 0; j < q.dim(); ++j) x[j] = soa[j * stride + b];
          table.push(x.data());
        }
        return false;
      },
      backend);
  return table;
}

std::size_t OrthogonalityGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += static_cast<std::size_t>(__builtin_popcountll(row(i)[w]));
  return d;
}

OrthogonalityGraph orthogonality_graph(const Form& q, const VectorTable& vectors, kernels::Backend backend) {
  const std::size_t n = vectors.size();
  OrthogonalityGraph g(n);
  if (n == 0) return g;
  const std::vector<std::uint32_t> soa = vectors.coordinate_major();
  std::vector<std::uint32_t> weights(q.dim());
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    q.times_gram(vectors[i], weights.data());
    kernels::dot_mod(backend, soa.data(), n, n, q.dim(), weights.data(), q.field().p(), out.data());
    for (std::size_t j = 0; j < n; ++j)
      if (out[j] == 0) g.set(i, j);
  }
  return g;
}

Mat identity(std::size_t n) {
  Mat m(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

Mat multiply(const Field& f, const Mat& a, const Mat& b, std::size_t n) {
  Mat c(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc % f.p();
    }
  return c;
}

Mat transpose(const Mat& a, std::size_t n) {
  Mat t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  return t;
}

bool preserves_form(const Form& q, const Mat& m) {
  const std::size_t n = q.dim();
  const Field& f = q.field();
  return multiply(f, multiply(f, transpose(m, n), q.gram(), n), m, n) == q.gram();
}

Mat reflection(const Form& q, const std::uint32_t* v) {
  const std::size_t n = q.dim();
  const Field& f = q.field();
  const std::uint32_t qv = q.value(v);
  if (qv == 0) throw DomainError("reflection in a vector of non-unit length");
  std::vector<std::uint32_t> w(n);
  q.times_gram(v, w.data());
  const std::uint32_t c = f.mul(2 % f.p(), f.inv(qv));
  Mat m = identity(n);
  // tau_v(x) = x - c (x^T G v) v, so column j gets -c * w_j * v.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = f.sub(m[i * n + j], f.mul(c, f.mul(v[i], w[j])));
  return m;
}

Matrix to_matrix(const Field& f, const Mat& m, std::size_t n) {
  Matrix out(f.ring(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = Scalar(f.ring(), static_cast<long>(m[i * n + j]));
  return out;
}

Mat from_matrix(const Matrix& m) {
  if (m.ring().kind() != RingKind::FiniteField || m.rows() != m.cols()) throw DomainError("fp::from_matrix needs a square F_p matrix");
  Mat out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = static_cast<std::uint32_t>(m.at(i, j).residue_value());
  return out;
}

}  // namespace stiefel::fp
