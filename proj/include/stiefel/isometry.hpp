#pragma once

#include <cstdint>
#include <vector>

#include "stiefel/fp.hpp"
#include "stiefel/quadmod.hpp"

namespace stiefel {

/// A matrix M (acting on columns) with M^T G M = G.
class Isometry {
 public:
  /// Throws DomainError unless `matrix` preserves the form of `module`.
  Isometry(QuadraticModule module, Matrix matrix);
  static Isometry identity(const QuadraticModule& q);

  const QuadraticModule& module() const { return module_; }
  const Matrix& matrix() const { return matrix_; }
  Vector apply(const Vector& x) const { return matrix_.apply(x); }
  bool is_identity() const;
  /// (a * b)(x) = a(b(x)).
  friend Isometry operator*(const Isometry& a, const Isometry& b);
  friend bool operator==(const Isometry& a, const Isometry& b) { return a.matrix_ == b.matrix_; }

 private:
  QuadraticModule module_;
  Matrix matrix_;
};

/// tau_v(x) = x - (B(x, v) / q(v)) v. Throws DomainError unless q(v) is a unit.
Isometry reflection(const QuadraticModule& q, const Vector& v);

/// tau_{v_1} o tau_{v_2} o ... o tau_{v_k}.
Isometry compose_reflections(const QuadraticModule& q, const std::vector<Vector>& vectors);

/**
 * Vectors v_1..v_k (k <= 2n) with phi = tau_{v_1} o ... o tau_{v_k}.
 * Walks an orthogonal basis b_1..b_n from diagonalize(); at step i the
 * remaining map fixes b_1..b_{i-1} and b_i is carried back from its image by
 * tau_{b_i - phi(b_i)} or, when that length is not a unit, by tau_{b_i} o
 * tau_{b_i + phi(b_i)}. Returned vectors are normalized.
 */
std::vector<Vector> cartan_dieudonne(const Isometry& phi);

/// phi with phi(f1[i]) = f2[i]; a product of at most 2k reflections, verified exactly.
Isometry frame_transport(const QuadraticModule& q, const Frame& f1, const Frame& f2);

/// psi (+) id on A (+) B, where `b` is the second summand.
Isometry direct_sum_identity(const Isometry& psi, const QuadraticModule& b);

/**
 * For phi on A (+) B (A the first a_rank coordinates) fixing every basis vector
 * of B, the block acting on A. Throws DomainError when phi moves B or is not
 * block-diagonal.
 */
Isometry stabilizer_restrict(const Isometry& phi, std::size_t a_rank);

/// O(q) for a small form over F_p, elements sorted lexicographically.
struct FiniteOrthogonalGroup {
  fp::Form form;
  std::vector<fp::Mat> elements;
  std::vector<fp::Mat> generators;  // the reflections, one per projective non-isotropic line

  std::size_t order() const { return elements.size(); }
  bool contains(const fp::Mat& m) const;
  Isometry element(std::size_t i) const;
};

/// Closure of the reflections under multiplication. Throws BudgetError past `cap` elements.
FiniteOrthogonalGroup enumerate_group(const QuadraticModule& q, std::size_t cap = 1000000);

struct Abelianization {
  std::size_t group_order = 0;
  std::size_t commutator_order = 0;
  unsigned exponent = 0;  // exponent of G / [G, G]
};

Abelianization abelianization(const FiniteOrthogonalGroup& g);
inline unsigned abelianization_exponent(const FiniteOrthogonalGroup& g) { return abelianization(g).exponent; }

namespace fp {
/// frame_transport on the word-sized path; frames given as coordinate lists.
Mat frame_transport(const Form& q, const std::vector<std::vector<std::uint32_t>>& f1,
                    const std::vector<std::vector<std::uint32_t>>& f2);
}  // namespace fp

}  // namespace stiefel
