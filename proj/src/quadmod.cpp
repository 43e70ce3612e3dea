#include "stiefel/quadmod.hpp"

#include "small_vectors.hpp"

namespace stiefel {
namespace {

Vector times_gram(const QuadraticModule& q, const Vector& x) { return q.gram().apply(x); }

void require_vector(const QuadraticModule& q, const Vector& x) {
  if (x.size() != q.rank()) throw DomainError("vector length does not match module rank");
}

void require_local(const RingDescriptor& ring, const char* what) {
  if (!ring.is_local()) throw DomainError(std::string(what) + " needs F_p, Z_(p) or Z/p^N, got " + ring.name());
}

}  // namespace

QuadraticModule::QuadraticModule(Matrix gram) : gram_(std::move(gram)) {
  if (!gram_.is_symmetric()) throw DomainError("Gram matrix must be square and symmetric");
}

QuadraticModule QuadraticModule::diagonal(const std::vector<Scalar>& entries) {
  return QuadraticModule(Matrix::diagonal(entries));
}

QuadraticModule QuadraticModule::diagonal(const RingDescriptor& ring, const std::vector<long>& entries) {
  Matrix g(ring, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g.at(i, i) = Scalar(ring, entries[i]);
  return QuadraticModule(std::move(g));
}

QuadraticModule QuadraticModule::euclidean(const RingDescriptor& ring, std::size_t n) {
  return QuadraticModule(Matrix::identity(ring, n));
}

Scalar QuadraticModule::determinant() const { return stiefel::determinant(gram_); }

bool QuadraticModule::is_nonsingular() const { return determinant().is_unit(); }

Scalar evaluate(const QuadraticModule& q, const Vector& x) {
  require_vector(q, x);
  if (x.empty()) return Scalar::zero(q.ring());
  return dot(x, times_gram(q, x));
}

Scalar gram_product(const QuadraticModule& q, const Vector& x, const Vector& y) {
  require_vector(q, x);
  require_vector(q, y);
  if (x.empty()) return Scalar::zero(q.ring());
  return dot(x, times_gram(q, y));
}

Scalar polar(const QuadraticModule& q, const Vector& x, const Vector& y) {
  const Scalar g = gram_product(q, x, y);
  return g + g;
}

QuadraticModule orthogonal_sum(const QuadraticModule& a, const QuadraticModule& b) {
  if (!(a.ring() == b.ring())) throw DomainError("orthogonal_sum: ring mismatch");
  const std::size_t n = a.rank(), m = b.rank();
  Matrix g(a.ring(), n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = a.gram().at(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g.at(n + i, n + j) = b.gram().at(i, j);
  return QuadraticModule(std::move(g));
}

QuadraticModule restrict_to(const QuadraticModule& q, const std::vector<Vector>& basis) {
  Matrix g(q.ring(), basis.size(), basis.size());
  std::vector<Vector> gb;
  gb.reserve(basis.size());
  for (const auto& b : basis) {
    require_vector(q, b);
    gb.push_back(times_gram(q, b));
  }
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      g.at(i, j) = basis.empty() || basis[i].empty() ? Scalar::zero(q.ring()) : dot(basis[i], gb[j]);
      g.at(j, i) = g.at(i, j);
    }
  return QuadraticModule(std::move(g));
}

Frame::Frame(const QuadraticModule& q, std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (!evaluate(q, vectors_[i]).is_one()) throw DomainError("frame vector " + to_string(vectors_[i]) + " is not a unit vector");
    for (std::size_t j = i + 1; j < vectors_.size(); ++j)
      if (!gram_product(q, vectors_[i], vectors_[j]).is_zero())
        throw DomainError("frame vectors " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal");
  }
}

Diagonalization diagonalize(const QuadraticModule& q) {
  const RingDescriptor& ring = q.ring();
  if (!ring.two_is_unit()) throw DomainError("diagonalize needs 2 to be a unit");
  if (!q.is_nonsingular()) throw DomainError("diagonalize needs a non-singular module");
  const std::size_t n = q.rank();
  std::vector<Vector> current;
  for (std::size_t i = 0; i < n; ++i) current.push_back(basis_vector(ring, n, i));
  std::vector<Vector> out;
  std::vector<Scalar> entries;
  while (!current.empty()) {
    const std::size_t m = current.size();
    std::optional<Vector> v;
    std::size_t drop = 0;
    auto try_vec = [&](const Vector& cand, std::size_t idx) {
      if (evaluate(q, cand).is_unit()) {
        v = cand;
        drop = idx;
        return true;
      }
      return false;
    };
    for (std::size_t i = 0; i < m && !v; ++i) try_vec(current[i], i);
    for (std::size_t i = 0; i < m && !v; ++i)
      for (std::size_t j = i + 1; j < m && !v; ++j) try_vec(current[i] + current[j], i);
    for (std::size_t i = 0; i < m && !v; ++i)
      for (std::size_t j = i + 1; j < m && !v; ++j)
        for (std::size_t k = j + 1; k < m && !v; ++k) try_vec(current[i] + current[j] + current[k], i);
    if (!v) {
      detail::for_each_small_vector(m, 3, [&](const std::vector<long>& c) {
        std::optional<std::size_t> unit_idx;
        Vector cand = zero_vector(ring, n);
        for (std::size_t i = 0; i < m; ++i) {
          const Scalar ci(ring, c[i]);
          if (!unit_idx && ci.is_unit()) unit_idx = i;
          if (!ci.is_zero()) cand = cand + ci * current[i];
        }
        return unit_idx && try_vec(cand, *unit_idx);
      });
    }
    if (!v) throw DomainError("diagonalize: no vector of unit length found");
    const Scalar qv = evaluate(q, *v);
    const Scalar qv_inv = qv.inverse();
    std::vector<Vector> next;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == drop) continue;
      const Scalar c = gram_product(q, current[i], *v) * qv_inv;
      next.push_back(normalize_direction(current[i] - c * *v));
    }
    out.push_back(*v);
    entries.push_back(qv);
    current = std::move(next);
  }
  Matrix basis = n ? Matrix::from_columns(ring, n, out) : Matrix(ring, 0, 0);
  return Diagonalization{std::move(basis), std::move(entries)};
}

Submodule orthogonal_to(const QuadraticModule& q, const std::vector<Vector>& vectors) {
  const std::size_t n = q.rank();
  if (vectors.empty()) {
    Submodule all{n, {}};
    for (std::size_t i = 0; i < n; ++i) all.basis.push_back(basis_vector(q.ring(), n, i));
    return all;
  }
  Matrix m(q.ring(), vectors.size(), n);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Vector gw = times_gram(q, vectors[i]);
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = gw[j];
  }
  return Submodule{n, kernel_basis(m)};
}

Submodule orthogonal_complement(const QuadraticModule& q, const std::vector<Vector>& u) {
  if (!q.is_nonsingular()) throw DomainError("orthogonal_complement needs a non-singular module");
  return orthogonal_to(q, u);
}

RadicalSplit split_radical(const QuadraticModule& q) {
  const RingDescriptor& ring = q.ring();
  require_local(ring, "split_radical");
  if (!ring.two_is_unit()) throw DomainError("split_radical needs 2 to be a unit");
  const std::size_t n = q.rank();
  const QuadraticModule reduced = reduce_mod_p(q);
  const RingDescriptor field = reduced.ring();
  std::vector<Vector> spanning = kernel_basis(reduced.gram());
  std::vector<std::size_t> core_idx;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Vector> trial = spanning;
    trial.push_back(basis_vector(field, n, j));
    if (rank(Matrix::from_columns(field, n, trial)) == trial.size()) {
      spanning = std::move(trial);
      core_idx.push_back(j);
    }
  }
  Submodule core{n, {}};
  for (std::size_t j : core_idx) core.basis.push_back(basis_vector(ring, n, j));
  Submodule radical = orthogonal_to(q, core.basis);
  return RadicalSplit{std::move(radical), std::move(core)};
}

Submodule complement_core(const QuadraticModule& q, const Frame& u, const Frame& v) {
  require_local(q.ring(), "complement_core");
  std::vector<Vector> constraints = u.vectors();
  constraints.insert(constraints.end(), v.vectors().begin(), v.vectors().end());
  const Submodule inter = orthogonal_to(q, constraints);
  const QuadraticModule restricted = restrict_to(q, inter.basis);
  const RadicalSplit split = split_radical(restricted);
  Submodule w{q.rank(), {}};
  for (const auto& coeffs : split.core.basis) {
    Vector x = zero_vector(q.ring(), q.rank());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (!coeffs[i].is_zero()) x = x + coeffs[i] * inter.basis[i];
    w.basis.push_back(std::move(x));
  }
  const std::size_t n = q.rank(), r = u.size(), s = v.size();
  if (n >= r + 2 * s && w.rank() < n - r - 2 * s)
    throw Error("complement_core: rank bound n - r - 2s violated");
  return w;
}

HyperbolicModule hyperbolic_module(const RingDescriptor& ring, std::size_t n) {
  if (!ring.two_is_unit()) throw DomainError("hyperbolic_module needs 2 to be a unit");
  const Scalar half = Scalar(ring, 2L).inverse();
  Matrix g(ring, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g.at(i, n + i) = half;
    g.at(n + i, i) = half;
  }
  QuadraticModule h(std::move(g));
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < n; ++i) {
    cols.push_back(basis_vector(ring, 2 * n, i) + basis_vector(ring, 2 * n, n + i));
    cols.push_back(basis_vector(ring, 2 * n, i) - basis_vector(ring, 2 * n, n + i));
  }
  Matrix p = n ? Matrix::from_columns(ring, 2 * n, cols) : Matrix(ring, 0, 0);
  std::vector<long> signs;
  for (std::size_t i = 0; i < n; ++i) {
    signs.push_back(1);
    signs.push_back(-1);
  }
  if (!(p.transpose() * h.gram() * p == QuadraticModule::diagonal(ring, signs).gram()))
    throw Error("hyperbolic_module: witness check failed");
  return HyperbolicModule{std::move(h), std::move(p)};
}

QuadraticModule reduce_mod_p(const QuadraticModule& q) {
  const RingDescriptor& ring = q.ring();
  require_local(ring, "reduce_mod_p");
  if (ring.kind() == RingKind::FiniteField) return q;
  const RingDescriptor field = ring.residue_field();
  Matrix g(field, q.rank(), q.rank());
  for (std::size_t i = 0; i < q.rank(); ++i)
    for (std::size_t j = 0; j < q.rank(); ++j) g.at(i, j) = residue(q.gram().at(i, j));
  return QuadraticModule(std::move(g));
}

bool is_isometric_ff(const QuadraticModule& a, const QuadraticModule& b) {
  if (a.ring().kind() != RingKind::FiniteField || !(a.ring() == b.ring()))
    throw DomainError("is_isometric_ff needs two forms over the same finite field");
  if (!a.is_nonsingular() || !b.is_nonsingular()) throw DomainError("is_isometric_ff needs non-singular forms");
  if (a.rank() != b.rank()) return false;
  const Scalar ratio = a.determinant() * b.determinant().inverse();
  return is_square(ratio).has_value();
}

}  // namespace stiefel
