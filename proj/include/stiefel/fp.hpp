#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "stiefel/kernels.hpp"
#include "stiefel/quadmod.hpp"

/// Word-sized arithmetic over small prime fields F_p (p <= kernels::kMaxModulus).
namespace stiefel::fp {

class Field {
 public:
  using Elem = std::uint32_t;

  explicit Field(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(Elem a, Elem b) const { return (a + b) % p_; }
  Elem sub(Elem a, Elem b) const { return (a + p_ - b) % p_; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  /// Throws DomainError for 0.
  Elem inv(Elem a) const;
  bool is_zero(Elem a) const { return a == 0; }
  bool is_unit(Elem a) const { return a != 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  bool is_square(Elem a) const { return square_[a] != 0; }
  Elem from_long(long v) const;
  RingDescriptor ring() const { return RingDescriptor::finite_field(p_); }

 private:
  std::uint32_t p_;
  std::vector<Elem> inv_;
  std::vector<char> square_;
};

/// Quadratic form on F_p^dim with Gram matrix entries in [0, p).
class Form {
 public:
  Form(Field field, std::size_t dim, std::vector<std::uint32_t> gram);
  static Form from_module(const QuadraticModule& q);
  static Form euclidean(const Field& field, std::size_t dim);

  const Field& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::uint32_t>& gram() const { return gram_; }
  QuadraticModule to_module() const;

  std::uint32_t value(const std::uint32_t* x) const;
  /// x^T G y (half the polar form).
  std::uint32_t gram_product(const std::uint32_t* x, const std::uint32_t* y) const;
  void times_gram(const std::uint32_t* x, std::uint32_t* out) const;

 private:
  Field field_;
  std::size_t dim_;
  std::vector<std::uint32_t> gram_;
};

/// Fixed-dimension vectors stored contiguously, in insertion order.
class VectorTable {
 public:
  explicit VectorTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? count_ : data_.size() / dim_; }
  const std::uint32_t* operator[](std::size_t i) const { return data_.data() + i * dim_; }
  void push(const std::uint32_t* x);
  /// Coordinate-major copy (stride = size()).
  std::vector<std::uint32_t> coordinate_major() const;
  /// Index of x when the table is lexicographically sorted.
  std::optional<std::size_t> find_sorted(const std::uint32_t* x) const;
  Vector to_vector(std::size_t i, const RingDescriptor& ring) const;

 private:
  std::size_t dim_;
  std::size_t count_ = 0;
  std::vector<std::uint32_t> data_;
};

/**
 * Visit F_p^dim in lexicographic order (coordinate 0 most significant) in
 * blocks, with q evaluated by the batched kernel. The callback receives the
 * coordinate-major block, its length, the q-values and the index of the first
 * vector; returning true stops the sweep. Throws BudgetError past `cap` vectors.
 */
using BlockVisitor = std::function<bool(const std::uint32_t* soa, std::size_t stride, std::size_t count,
                                        const std::uint32_t* values, std::uint64_t first_index)>;
void sweep(const Form& q, const BlockVisitor& visit, kernels::Backend backend = kernels::active_backend(),
           std::uint64_t cap = std::uint64_t{1} << 28);

/// All x with q(x) == value, lexicographically sorted.
VectorTable vectors_with_value(const Form& q, std::uint32_t value,
                               kernels::Backend backend = kernels::active_backend());

/// Symmetric adjacency bitsets of the relation x^T G y == 0 on a vector table.
class OrthogonalityGraph {
 public:
  OrthogonalityGraph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }
  bool adjacent(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  std::size_t degree(std::size_t i) const;

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

OrthogonalityGraph orthogonality_graph(const Form& q, const VectorTable& vectors,
                                       kernels::Backend backend = kernels::active_backend());

/// Square matrices over F_p, row-major.
using Mat = std::vector<std::uint32_t>;

Mat identity(std::size_t n);
Mat multiply(const Field& f, const Mat& a, const Mat& b, std::size_t n);
Mat transpose(const Mat& a, std::size_t n);
bool preserves_form(const Form& q, const Mat& m);
/// tau_v with q(v) a unit.
Mat reflection(const Form& q, const std::uint32_t* v);
Matrix to_matrix(const Field& f, const Mat& m, std::size_t n);
Mat from_matrix(const Matrix& m);

}  // namespace stiefel::fp
