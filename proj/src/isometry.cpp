#include "stiefel/isometry.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "stiefel/detail/transport.hpp"

namespace stiefel {
namespace {

using detail::ReflectionSpace;
using detail::ScalarArith;

ReflectionSpace<ScalarArith> scalar_space(const QuadraticModule& q) {
  const std::size_t n = q.rank();
  std::vector<Scalar> g;
  g.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.push_back(q.gram().at(i, j));
  return ReflectionSpace<ScalarArith>(ScalarArith{q.ring()}, n, std::move(g));
}

Matrix to_matrix(const RingDescriptor& ring, const std::vector<Scalar>& m, std::size_t n) {
  Matrix out(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = m[i * n + j];
  return out;
}

std::vector<Scalar> from_matrix(const Matrix& m) {
  std::vector<Scalar> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.at(i, j));
  return out;
}

void require_reflection_ring(const RingDescriptor& ring) {
  if (!ring.two_is_unit()) throw DomainError("reflections need 2 to be a unit");
}

// Group elements of O_n(F_p) for n <= 4 packed one byte per entry.
struct Key {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return std::hash<std::uint64_t>()(k.lo * 0x9E3779B97F4A7C15ULL ^ k.hi); }
};

Key pack(const fp::Mat& m) {
  Key k;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::uint64_t v = m[i];
    if (i < 8)
      k.lo |= v << (8 * i);
    else
      k.hi |= v << (8 * (i - 8));
  }
  return k;
}

using KeySet = std::unordered_set<Key, KeyHash>;

// Subgroup generated by `gens`, as a set and an element list.
std::vector<fp::Mat> closure(const fp::Field& f, std::size_t n, const std::vector<fp::Mat>& gens, KeySet& seen,
                             std::size_t cap) {
  std::vector<fp::Mat> elems{fp::identity(n)};
  seen.clear();
  seen.insert(pack(elems[0]));
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const fp::Mat& s : gens) {
      fp::Mat next = fp::multiply(f, s, elems[head], n);
      if (seen.insert(pack(next)).second) {
        if (elems.size() >= cap) throw BudgetError("group enumeration exceeded the element cap");
        elems.push_back(std::move(next));
      }
    }
  }
  return elems;
}

}  // namespace

Isometry::Isometry(QuadraticModule module, Matrix matrix) : module_(std::move(module)), matrix_(std::move(matrix)) {
  const std::size_t n = module_.rank();
  if (matrix_.rows() != n || matrix_.cols() != n || !(matrix_.ring() == module_.ring()))
    throw DomainError("isometry matrix has the wrong shape or ring");
  if (!(matrix_.transpose() * module_.gram() * matrix_ == module_.gram()))
    throw DomainError("matrix does not preserve the quadratic form");
}

Isometry Isometry::identity(const QuadraticModule& q) { return Isometry(q, Matrix::identity(q.ring(), q.rank())); }

bool Isometry::is_identity() const { return matrix_ == Matrix::identity(module_.ring(), module_.rank()); }

Isometry operator*(const Isometry& a, const Isometry& b) {
  if (!(a.module_.gram() == b.module_.gram())) throw DomainError("composing isometries of different modules");
  return Isometry(a.module_, a.matrix_ * b.matrix_);
}

Isometry reflection(const QuadraticModule& q, const Vector& v) {
  require_reflection_ring(q.ring());
  if (v.size() != q.rank()) throw DomainError("reflection vector has the wrong length");
  const auto space = scalar_space(q);
  auto m = space.identity();
  space.reflect_left(m, v);
  return Isometry(q, to_matrix(q.ring(), m, q.rank()));
}

Isometry compose_reflections(const QuadraticModule& q, const std::vector<Vector>& vectors) {
  require_reflection_ring(q.ring());
  const auto space = scalar_space(q);
  auto m = space.identity();
  for (auto it = vectors.rbegin(); it != vectors.rend(); ++it) space.reflect_left(m, *it);
  return Isometry(q, to_matrix(q.ring(), m, q.rank()));
}

std::vector<Vector> cartan_dieudonne(const Isometry& phi) {
  const QuadraticModule& q = phi.module();
  require_reflection_ring(q.ring());
  if (q.ring().kind() == RingKind::Integers) throw DomainError("cartan_dieudonne needs a field or local ring");
  const std::size_t n = q.rank();
  const Diagonalization diag = diagonalize(q);
  const auto space = scalar_space(q);
  auto psi = from_matrix(phi.matrix());
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector b = diag.basis.column(i);
    for (const Vector& r : space.carry(space.apply(psi, b), b)) {
      space.reflect_left(psi, r);
      out.push_back(normalize_direction(r));
    }
  }
  if (!(to_matrix(q.ring(), psi, n) == Matrix::identity(q.ring(), n)))
    throw Error("Cartan-Dieudonne reduction did not reach the identity");
  if (!(compose_reflections(q, out) == phi)) throw Error("Cartan-Dieudonne factorization failed verification");
  return out;
}

Isometry frame_transport(const QuadraticModule& q, const Frame& f1, const Frame& f2) {
  require_reflection_ring(q.ring());
  if (f1.size() != f2.size()) throw DomainError("frame_transport needs frames of equal length");
  Frame(q, f1.vectors());
  Frame(q, f2.vectors());
  const auto space = scalar_space(q);
  const auto m = space.transport(f1.vectors(), f2.vectors());
  Isometry phi(q, to_matrix(q.ring(), m, q.rank()));
  for (std::size_t i = 0; i < f1.size(); ++i)
    if (!(phi.apply(f1[i]) == f2[i])) throw Error("frame transport failed verification");
  return phi;
}

Isometry direct_sum_identity(const Isometry& psi, const QuadraticModule& b) {
  const QuadraticModule sum = orthogonal_sum(psi.module(), b);
  const std::size_t a = psi.module().rank();
  Matrix m = Matrix::identity(sum.ring(), sum.rank());
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) m.at(i, j) = psi.matrix().at(i, j);
  return Isometry(sum, std::move(m));
}

Isometry stabilizer_restrict(const Isometry& phi, std::size_t a_rank) {
  const QuadraticModule& q = phi.module();
  const std::size_t n = q.rank();
  if (a_rank > n) throw DomainError("stabilizer_restrict: block larger than the module");
  const Matrix& m = phi.matrix();
  for (std::size_t j = a_rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (!(m.at(i, j) == (i == j ? Scalar::one(q.ring()) : Scalar::zero(q.ring()))))
        throw DomainError("stabilizer_restrict: phi moves the second block");
  for (std::size_t j = 0; j < a_rank; ++j)
    for (std::size_t i = a_rank; i < n; ++i)
      if (!m.at(i, j).is_zero()) throw DomainError("stabilizer_restrict: phi is not block-diagonal");
  Matrix ga(q.ring(), a_rank, a_rank);
  Matrix block(q.ring(), a_rank, a_rank);
  for (std::size_t i = 0; i < a_rank; ++i)
    for (std::size_t j = 0; j < a_rank; ++j) {
      ga.at(i, j) = q.gram().at(i, j);
      block.at(i, j) = m.at(i, j);
    }
  return Isometry(QuadraticModule(std::move(ga)), std::move(block));
}

bool FiniteOrthogonalGroup::contains(const fp::Mat& m) const {
  return std::binary_search(elements.begin(), elements.end(), m);
}

Isometry FiniteOrthogonalGroup::element(std::size_t i) const {
  return Isometry(form.to_module(), fp::to_matrix(form.field(), elements.at(i), form.dim()));
}

FiniteOrthogonalGroup enumerate_group(const QuadraticModule& q, std::size_t cap) {
  if (q.ring().kind() != RingKind::FiniteField) throw DomainError("enumerate_group needs a finite field");
  if (q.rank() == 0 || q.rank() > 4) throw DomainError("enumerate_group supports rank 1 to 4");
  if (!q.is_nonsingular()) throw DomainError("enumerate_group needs a non-singular form");
  FiniteOrthogonalGroup g{fp::Form::from_module(q), {}, {}};
  const fp::Form& form = g.form;
  const fp::Field& f = form.field();
  const std::size_t n = form.dim();
  // One reflection per line: vectors whose first nonzero coordinate is 1.
  fp::sweep(form, [&](const std::uint32_t* soa, std::size_t stride, std::size_t count, const std::uint32_t* values,
                      std::uint64_t) {
    std::vector<std::uint32_t> v(n);
    for (std::size_t i = 0; i < count; ++i) {
      if (values[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = soa[j * stride + i];
      const auto lead = std::find_if(v.begin(), v.end(), [](std::uint32_t x) { return x != 0; });
      if (lead == v.end() || *lead != 1) continue;
      g.generators.push_back(fp::reflection(form, v.data()));
    }
    return false;
  });
  KeySet seen;
  g.elements = closure(f, n, g.generators, seen, cap);
  std::sort(g.elements.begin(), g.elements.end());
  for (const auto& e : g.elements)
    if (!fp::preserves_form(form, e)) throw Error("enumerated element is not an isometry");
  return g;
}

Abelianization abelianization(const FiniteOrthogonalGroup& g) {
  const fp::Field& f = g.form.field();
  const std::size_t n = g.form.dim();
  auto inverse = [&](const fp::Mat& m) {
    // Isometries satisfy m^{-1} = G^{-1} m^T G; repeated powers are simpler here.
    fp::Mat prev = m;
    fp::Mat cur = fp::multiply(f, m, m, n);
    const fp::Mat id = fp::identity(n);
    if (m == id) return id;
    while (cur != id) {
      prev = cur;
      cur = fp::multiply(f, cur, m, n);
    }
    return prev;
  };
  KeySet h_set;
  std::vector<fp::Mat> h_gens;
  std::vector<fp::Mat> h_elems = closure(f, n, h_gens, h_set, g.elements.size() + 1);
  auto absorb = [&](const fp::Mat& c) {
    if (h_set.count(pack(c))) return false;
    h_gens.push_back(c);
    h_elems = closure(f, n, h_gens, h_set, g.elements.size() + 1);
    return true;
  };
  std::vector<fp::Mat> gen_inv;
  for (const auto& s : g.generators) gen_inv.push_back(inverse(s));
  for (std::size_t i = 0; i < g.generators.size(); ++i)
    for (std::size_t j = 0; j < g.generators.size(); ++j) {
      const fp::Mat c = fp::multiply(
          f, fp::multiply(f, gen_inv[i], gen_inv[j], n), fp::multiply(f, g.generators[i], g.generators[j], n), n);
      absorb(c);
    }
  // Normal closure under conjugation by the generators.
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < g.generators.size() && !grew; ++i)
      for (std::size_t k = 0; k < h_gens.size() && !grew; ++k)
        grew = absorb(fp::multiply(f, fp::multiply(f, g.generators[i], h_gens[k], n), gen_inv[i], n));
  }
  Abelianization out;
  out.group_order = g.elements.size();
  out.commutator_order = h_elems.size();
  unsigned exponent = 1;
  for (const auto& e : g.elements) {
    unsigned k = 1;
    fp::Mat power = e;
    while (!h_set.count(pack(power))) {
      power = fp::multiply(f, power, e, n);
      ++k;
    }
    exponent = std::lcm(exponent, k);
  }
  out.exponent = exponent;
  return out;
}

namespace fp {

Mat frame_transport(const Form& q, const std::vector<std::vector<std::uint32_t>>& f1,
                    const std::vector<std::vector<std::uint32_t>>& f2) {
  const ReflectionSpace<Field> space(q.field(), q.dim(), q.gram());
  return space.transport(f1, f2);
}

}  // namespace fp

}  // namespace stiefel
