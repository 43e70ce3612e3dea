#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "stiefel/rings.hpp"

namespace stiefel {

using Vector = std::vector<Scalar>;

/// Vector over `ring` from integer entries.
Vector make_vector(const RingDescriptor& ring, std::initializer_list<long> entries);
Vector make_vector(const RingDescriptor& ring, const std::vector<long>& entries);
Vector zero_vector(const RingDescriptor& ring, std::size_t n);
/// The i-th standard basis vector of length n.
Vector basis_vector(const RingDescriptor& ring, std::size_t n, std::size_t i);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(const Scalar& c, const Vector& v);
bool is_zero(const Vector& v);
/// Some coordinate is a unit.
bool is_primitive(const Vector& v);
std::string to_string(const Vector& v);

/**
 * Canonical representative of the line through v under unit rescaling:
 * F_p and Z/p^N make the first unit coordinate 1; Q makes v a primitive
 * integer vector with positive leading entry; Z_(p) clears denominators and
 * the p-free content (both units) and fixes the sign; Z divides by the
 * content and fixes the sign.
 */
Vector normalize_direction(const Vector& v);

/// Dense matrix over one ring, row-major. Vectors act as columns.
class Matrix {
 public:
  Matrix(const RingDescriptor& ring, std::size_t rows, std::size_t cols);
  static Matrix identity(const RingDescriptor& ring, std::size_t n);
  static Matrix from_rows(const RingDescriptor& ring, const std::vector<std::vector<long>>& rows);
  static Matrix from_columns(const RingDescriptor& ring, std::size_t rows, const std::vector<Vector>& columns);
  static Matrix diagonal(const std::vector<Scalar>& entries);

  const RingDescriptor& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  Matrix transpose() const;
  Vector apply(const Vector& v) const;
  bool is_symmetric() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  RingDescriptor ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

/// Sum of a_i * b_i.
Scalar dot(const Vector& a, const Vector& b);

Scalar determinant(const Matrix& m);
/// Inverse over the ring, or nullopt when the determinant is not a unit.
std::optional<Matrix> inverse(const Matrix& m);

/**
 * Basis of {x : M x = 0} that spans a direct summand of R^n.
 *
 * Elimination uses full pivoting on the entry of least valuation (ties broken
 * by column, then row), so over Z_(p) every basis vector has a coordinate
 * equal to 1 and the remaining coordinates in Z_(p). Over Z/p^N the canonical
 * integer lifts are solved over Z_(p) and the result reduced mod p^N. Over
 * fields this is the usual reduced-row-echelon nullspace.
 */
std::vector<Vector> kernel_basis(const Matrix& m);

/// Rank of the image of the canonical lift over the fraction field.
std::size_t rank(const Matrix& m);

}  // namespace stiefel
