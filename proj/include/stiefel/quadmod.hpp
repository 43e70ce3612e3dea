#pragma once

#include <cstddef>
#include <vector>

#include "stiefel/linalg.hpp"

namespace stiefel {

/**
 * A free module R^n with the quadratic form q(x) = x^T G x.
 *
 * G is symmetric; the polar form is B(x, y) = q(x+y) - q(x) - q(y) = 2 x^T G y,
 * so <a> has Gram matrix [a] and q(x) = B(x, x) / 2. The module is
 * non-singular when det G is a unit.
 */
class QuadraticModule {
 public:
  explicit QuadraticModule(Matrix gram);
  /// <a_1, ..., a_n>.
  static QuadraticModule diagonal(const std::vector<Scalar>& entries);
  static QuadraticModule diagonal(const RingDescriptor& ring, const std::vector<long>& entries);
  /// The Euclidean module E^n = n<1>.
  static QuadraticModule euclidean(const RingDescriptor& ring, std::size_t n);

  const RingDescriptor& ring() const { return gram_.ring(); }
  std::size_t rank() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  Scalar determinant() const;
  bool is_nonsingular() const;

 private:
  Matrix gram_;
};

Scalar evaluate(const QuadraticModule& q, const Vector& x);
/// B(x, y) = 2 x^T G y.
Scalar polar(const QuadraticModule& q, const Vector& x, const Vector& y);
/// x^T G y, i.e. B(x, y) / 2.
Scalar gram_product(const QuadraticModule& q, const Vector& x, const Vector& y);

/// Block-diagonal Gram matrix; the first summand occupies the leading coordinates.
QuadraticModule orthogonal_sum(const QuadraticModule& a, const QuadraticModule& b);

/// A submodule given by a basis of vectors in the ambient module.
struct Submodule {
  std::size_t ambient_rank = 0;
  std::vector<Vector> basis;

  std::size_t rank() const { return basis.size(); }
};

/// Gram matrix of q restricted to the span of `basis`.
QuadraticModule restrict_to(const QuadraticModule& q, const std::vector<Vector>& basis);

/// An ordered list of unit-length, pairwise orthogonal vectors.
class Frame {
 public:
  Frame() = default;
  /// Throws DomainError unless the vectors form a frame for q.
  Frame(const QuadraticModule& q, std::vector<Vector> vectors);

  std::size_t size() const { return vectors_.size(); }
  const std::vector<Vector>& vectors() const { return vectors_; }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }

 private:
  std::vector<Vector> vectors_;
};

/// P with P^T G P = diag(entries), every entry a unit. Columns of P are the new basis.
struct Diagonalization {
  Matrix basis;
  std::vector<Scalar> entries;
};

/**
 * Orthogonal basis of unit-length-unit vectors for a non-singular module over
 * a ring with 2 a unit. Each step probes e_i, then e_i+e_j, then e_i+e_j+e_k
 * (in the current basis), then any primitive vector of small height, for a
 * vector whose value is a unit, and splits it off.
 */
Diagonalization diagonalize(const QuadraticModule& q);

/// U^perp for a non-singular q; a direct summand over local rings.
Submodule orthogonal_complement(const QuadraticModule& q, const std::vector<Vector>& u);

/// Solutions of B(x, w) = 0 for every w in `vectors` (no non-singularity needed).
Submodule orthogonal_to(const QuadraticModule& q, const std::vector<Vector>& vectors);

/**
 * V = radical (+) core over F_p, Z_(p) or Z/p^N: `core` is non-singular and
 * `radical` is its orthogonal complement inside V, on which q takes values in
 * the maximal ideal.
 */
struct RadicalSplit {
  Submodule radical;
  Submodule core;
};
RadicalSplit split_radical(const QuadraticModule& q);

/// Non-singular W inside U^perp cap V^perp of rank >= n - r - 2s.
Submodule complement_core(const QuadraticModule& q, const Frame& u, const Frame& v);

/// H(R^n): Gram [[0, I/2], [I/2, 0]] and P with P^T G P = n<1,-1>.
struct HyperbolicModule {
  QuadraticModule module;
  Matrix witness;
};
HyperbolicModule hyperbolic_module(const RingDescriptor& ring, std::size_t n);

/// Entrywise residue of the Gram matrix in F_p.
QuadraticModule reduce_mod_p(const QuadraticModule& q);

/// Non-singular forms over F_p: equal rank and det ratio a square.
bool is_isometric_ff(const QuadraticModule& a, const QuadraticModule& b);

}  // namespace stiefel
