#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "stiefel/fp.hpp"
#include "stiefel/quadmod.hpp"

// Reflection arithmetic written once over an abstract coefficient type, so the
// exact Scalar path and the word-sized F_p path run the same algorithm.
// An Arith provides Elem, zero, one, add, sub, mul, neg, inv, is_unit, eq.
namespace stiefel::detail {

/// Scalar arithmetic in one ring.
struct ScalarArith {
  using Elem = Scalar;
  RingDescriptor ring;
  Elem zero() const { return Scalar::zero(ring); }
  Elem one() const { return Scalar::one(ring); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return a.inverse(); }
  bool is_unit(const Elem& a) const { return a.is_unit(); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
};

/// A form x^T G y with G row-major, plus the reflection operations on it.
template <class Arith>
class ReflectionSpace {
 public:
  using Elem = typename Arith::Elem;
  using Vec = std::vector<Elem>;
  using Mat = std::vector<Elem>;  // row-major n x n

  ReflectionSpace(Arith arith, std::size_t n, Mat gram) : a_(std::move(arith)), n_(n), gram_(std::move(gram)) {}

  std::size_t dim() const { return n_; }
  const Arith& arith() const { return a_; }

  Vec times_gram(const Vec& x) const {
    Vec out(n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i] = a_.add(out[i], a_.mul(gram_[i * n_ + j], x[j]));
    return out;
  }
  Elem gram_product(const Vec& x, const Vec& y) const {
    const Vec gy = times_gram(y);
    Elem acc = a_.zero();
    for (std::size_t i = 0; i < n_; ++i) acc = a_.add(acc, a_.mul(x[i], gy[i]));
    return acc;
  }
  Elem value(const Vec& x) const { return gram_product(x, x); }

  Mat identity() const {
    Mat m(n_ * n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i) m[i * n_ + i] = a_.one();
    return m;
  }
  Vec column(const Mat& m, std::size_t j) const {
    Vec c(n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i) c[i] = m[i * n_ + j];
    return c;
  }
  Vec apply(const Mat& m, const Vec& x) const {
    Vec out(n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i] = a_.add(out[i], a_.mul(m[i * n_ + j], x[j]));
    return out;
  }
  Vec sub(const Vec& x, const Vec& y) const {
    Vec out(n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i) out[i] = a_.sub(x[i], y[i]);
    return out;
  }
  Vec add(const Vec& x, const Vec& y) const {
    Vec out(n_, a_.zero());
    for (std::size_t i = 0; i < n_; ++i) out[i] = a_.add(x[i], y[i]);
    return out;
  }
  bool equal(const Vec& x, const Vec& y) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!a_.eq(x[i], y[i])) return false;
    return true;
  }

  /// m <- tau_v o m, where tau_v(x) = x - 2 (x^T G v) / q(v) * v. Needs q(v) a unit.
  void reflect_left(Mat& m, const Vec& v) const {
    const Elem qv = value(v);
    if (!a_.is_unit(qv)) throw DomainError("reflection in a vector of non-unit length");
    const Vec gv = times_gram(v);
    const Elem c = a_.mul(a_.add(a_.one(), a_.one()), a_.inv(qv));
    for (std::size_t j = 0; j < n_; ++j) {
      Elem s = a_.zero();
      for (std::size_t k = 0; k < n_; ++k) s = a_.add(s, a_.mul(gv[k], m[k * n_ + j]));
      const Elem f = a_.mul(c, s);
      for (std::size_t i = 0; i < n_; ++i) m[i * n_ + j] = a_.sub(m[i * n_ + j], a_.mul(f, v[i]));
    }
  }

  /**
   * Reflections r with (tau_{r_k} o ... o tau_{r_1}) x = y, given q(x) = q(y) a
   * unit: one reflection in x - y when its length is a unit, otherwise
   * x + y followed by y itself (one of the two lengths is a unit because
   * q(x - y) + q(x + y) = 4 q(y) and the ring is local). Every reflection fixes
   * the vectors orthogonal to both x and y.
   */
  std::vector<Vec> carry(const Vec& x, const Vec& y) const {
    if (equal(x, y)) return {};
    const Vec d = sub(x, y);
    if (a_.is_unit(value(d))) return {d};
    const Vec s = add(x, y);
    if (!a_.is_unit(value(s))) throw DomainError("neither x - y nor x + y has unit length");
    return {s, y};
  }

  /**
   * An isometry sending source[i] to target[i] for frames of equal length:
   * a product of reflections built one frame vector at a time, each step fixing
   * the target vectors already placed.
   */
  Mat transport(const std::vector<Vec>& source, const std::vector<Vec>& target) const {
    if (source.size() != target.size()) throw DomainError("frame_transport needs frames of equal length");
    Mat psi = identity();
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Vec x = apply(psi, source[i]);
      for (const Vec& r : carry(x, target[i])) reflect_left(psi, r);
    }
    for (std::size_t i = 0; i < source.size(); ++i)
      if (!equal(apply(psi, source[i]), target[i])) throw Error("frame transport failed verification");
    return psi;
  }

 private:
  Arith a_;
  std::size_t n_;
  Mat gram_;
};

}  // namespace stiefel::detail
