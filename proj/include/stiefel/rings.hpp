#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "stiefel/error.hpp"

namespace stiefel {

enum class RingKind : std::uint8_t {
  FiniteField,     // F_p, p an odd prime
  Rationals,       // Q
  LocalizedAtP,    // Z_(p): rationals whose denominator is prime to p
  PadicTruncated,  // Z/p^N, standing in for the p-adic integers
  Integers,        // Z
};

/**
 * Identifies one of the supported coefficient rings.
 *
 * Finite rings (F_p and Z/p^N) require p^N < 2^62 so residues fit a machine
 * word. `henselian()` is true only for Z/p^N; `formally_real()` refers to the
 * quotient field and is true for Q and Z_(p).
 */
class RingDescriptor {
 public:
  static RingDescriptor finite_field(std::uint64_t p);
  static RingDescriptor rationals();
  static RingDescriptor localized(std::uint64_t p);
  static RingDescriptor padic(std::uint64_t p, unsigned precision);
  static RingDescriptor integers();

  RingKind kind() const { return kind_; }
  /// The distinguished prime; 0 for Q and Z.
  std::uint64_t prime() const { return p_; }
  /// N for Z/p^N, 1 for F_p, 0 otherwise.
  unsigned precision() const { return precision_; }
  /// p for F_p, p^N for Z/p^N, 0 for the infinite rings.
  std::uint64_t modulus() const { return modulus_; }

  bool is_finite() const {
    return kind_ == RingKind::FiniteField || kind_ == RingKind::PadicTruncated;
  }
  bool is_field() const {
    return kind_ == RingKind::FiniteField || kind_ == RingKind::Rationals;
  }
  /// Local with residue field F_p (includes F_p itself).
  bool is_local() const {
    return kind_ == RingKind::FiniteField || kind_ == RingKind::LocalizedAtP ||
           kind_ == RingKind::PadicTruncated;
  }
  bool henselian() const { return kind_ == RingKind::PadicTruncated; }
  bool formally_real() const {
    return kind_ == RingKind::Rationals || kind_ == RingKind::LocalizedAtP;
  }
  bool two_is_unit() const { return kind_ != RingKind::Integers; }

  /// F_p for the local rings; throws for Q and Z.
  RingDescriptor residue_field() const;

  /// Short human-readable name: F5, Q, Z(5), Z5^3, Z.
  std::string name() const;
  /// Inverse of name(); also accepts "F:5", "Zloc:5", "Zp:5:3".
  static RingDescriptor parse(const std::string& text);

  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.precision_ == b.precision_;
  }

 private:
  RingDescriptor(RingKind kind, std::uint64_t p, unsigned precision, std::uint64_t modulus)
      : kind_(kind), p_(p), precision_(precision), modulus_(modulus) {}

  RingKind kind_;
  std::uint64_t p_;
  unsigned precision_;
  std::uint64_t modulus_;
};

/**
 * An element of a ring described by a RingDescriptor.
 *
 * Finite rings store the canonical residue in [0, modulus). Infinite rings
 * store a reduced rational; for Z_(p) the denominator is prime to p and for Z
 * it is 1. Binary operations on scalars of different rings throw DomainError.
 */
class Scalar {
 public:
  Scalar(const RingDescriptor& ring, long value);
  Scalar(const RingDescriptor& ring, const mpz_class& value);
  /// Throws DomainError when the rational does not lie in the ring.
  static Scalar from_rational(const RingDescriptor& ring, const mpq_class& value);
  static Scalar zero(const RingDescriptor& ring) { return Scalar(ring, 0L); }
  static Scalar one(const RingDescriptor& ring) { return Scalar(ring, 1L); }

  const RingDescriptor& ring() const { return ring_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_unit() const;

  /// Canonical rational lift (residues lift to [0, modulus)).
  mpq_class to_rational() const;
  /// Residue in [0, modulus); finite rings only.
  std::uint64_t residue_value() const;
  /// Residue lifted to (-modulus/2, modulus/2]; finite rings only.
  long long centered_value() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Multiplicative inverse; throws DomainError for non-units.
  Scalar inverse() const;
  /// The unique q with q*divisor == *this when it exists in the ring
  /// (for Z/p^N the canonical representative of lowest valuation).
  std::optional<Scalar> divide(const Scalar& divisor) const;

  /// Canonical text form: residues as integers, rationals as a/b.
  std::string to_string() const;

 private:
  Scalar(const RingDescriptor& ring, std::variant<std::uint64_t, mpq_class> value)
      : ring_(ring), value_(std::move(value)) {}
  void check_same_ring(const Scalar& other) const;

  RingDescriptor ring_;
  std::variant<std::uint64_t, mpq_class> value_;
};

/// p-adic valuation; +infinity for zero.
class Valuation {
 public:
  static Valuation infinite() { return Valuation(); }
  explicit Valuation(long value) : finite_(true), value_(value) {}

  bool is_infinite() const { return !finite_; }
  /// Throws DomainError for the infinite valuation.
  long value() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

 private:
  Valuation() : finite_(false), value_(0) {}
  bool finite_;
  long value_;
};

/**
 * nu_p(x). For Q and Z any prime may be supplied; for Z_(p) and Z/p^N it must
 * be the ring's prime (an element of Z/p^N divisible by p^N counts as zero).
 */
Valuation valuation(const Scalar& x, std::uint64_t p);
/// nu_p(x) using the ring's own prime.
Valuation valuation(const Scalar& x);

/// Image in the residue field F_p of Z_(p) or Z/p^N.
Scalar residue(const Scalar& x);

/// A square root in F_p when one exists (the smaller residue of the pair).
std::optional<Scalar> is_square(const Scalar& a);

/**
 * A k-tuple with a == sum x_i^2, or nullopt when none exists in the searched
 * range. Finite rings are searched exhaustively and the lexicographically
 * least tuple is returned. Infinite rings are searched over non-negative
 * coordinates of height max(|num|,|den|) <= height_bound; for Z_(p) the
 * coordinates must also lie in Z_(p).
 */
std::optional<std::vector<Scalar>> sum_of_squares(const Scalar& a, unsigned k,
                                                  unsigned long height_bound = 0);

/**
 * Newton iteration for a simple root of the polynomial with coefficients
 * `coeffs` (constant term first) over Z/p^N, starting from a root mod p.
 * Returns the unique lift congruent to `r0`. Throws DomainError when r0 is not
 * a root mod p or f'(r0) is divisible by p.
 */
Scalar hensel_root(std::span<const Scalar> coeffs, const Scalar& r0);

/// True when n is prime (deterministic trial division; n < 2^62).
bool is_prime(std::uint64_t n);

}  // namespace stiefel
