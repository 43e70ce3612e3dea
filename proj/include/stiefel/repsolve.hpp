#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stiefel/profile.hpp"
#include "stiefel/quadmod.hpp"

namespace stiefel {

/**
 * How a solver result was obtained. Exhaustive results over F_p and Z/p^N are
 * proofs either way; over Q and Z_(p) a missing result only means nothing was
 * found among primitive integer vectors of max-norm at most the bound.
 */
enum class SearchRegime {
  Exhaustive,
  HenselLifted,
  RescaledFromQuotientField,
  BoundedSearch,  // found over Q by the bounded integer search
  NotFoundWithinBound,
};

const char* regime_name(SearchRegime regime);

struct SearchOptions {
  /// Max-norm bound for integer search vectors over Q and Z_(p).
  long height_bound = 8;
};

/// A primitive zero of q, or its absence, together with how it was decided.
struct IsotropyWitness {
  std::optional<Vector> vector;
  SearchRegime regime = SearchRegime::Exhaustive;
  unsigned precision = 0;  // N for Z/p^N, else 0
  long height_bound = 0;   // only meaningful for Q and Z_(p)
  bool found() const { return vector.has_value(); }
};

/**
 * Primitive isotropic vector of a non-singular module over F_p, Q, Z_(p) or
 * Z/p^N. F_p: lexicographically first projective point. Z/p^N: hyperbolic
 * pair mod p, then a Hensel root of a X^2 + b X + c. Q, Z_(p): bounded integer
 * search in increasing height, then valuation rescaling for Z_(p).
 * The returned vector is passed through normalize_direction.
 */
IsotropyWitness find_isotropic(const QuadraticModule& q, const SearchOptions& options = {});

/// v with q(v) = a for a unit a, extracted from a transversal zero of q (+) <-a>.
struct Representation {
  std::optional<Vector> vector;
  SearchRegime regime = SearchRegime::Exhaustive;
  unsigned precision = 0;
  long height_bound = 0;
  bool found() const { return vector.has_value(); }
};

Representation represents(const QuadraticModule& q, const Scalar& a, const SearchOptions& options = {});

/**
 * x = x_1 + ... + x_n in the orthogonal sum of `blocks` with q(x) = 0 and
 * every q_i(x_i) a unit. F_p: exhaustive, lexicographically first.
 * Z/p^N: an F_p witness lifted along a direction y with B(x, y) a unit.
 * Q, Z_(p): bounded integer search. Throws DomainError when the hypotheses
 * (non-singular blocks, even count, isotropic sum where decidable) fail.
 */
Representation transversal_zero(const std::vector<QuadraticModule>& blocks, const SearchOptions& options = {});

/// Divides a nonzero rational vector by its first coordinate of least p-adic valuation.
Vector scale_to_primitive(const Vector& x, const RingDescriptor& target);

/// Which hypotheses of the two unit-vector criteria hold for (n, r, s).
struct UnitVectorBoundReport {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t s = 0;
  bool residue_conditions[4] = {false, false, false, false};   // criterion over A and its residue field
  bool quotient_conditions[4] = {false, false, false, false};  // criterion over the quotient field (needs r >= s)
  bool any_condition() const;
  std::optional<Vector> vector;
  SearchRegime regime = SearchRegime::Exhaustive;
  bool found_in_core = false;
  std::string describe() const;
};

/**
 * A unit vector in U^perp cap V^perp inside E^n, searched first in the
 * non-singular core from complement_core and then in the whole intersection.
 */
UnitVectorBoundReport unit_vector_in_complement(const QuadraticModule& euclidean, const Frame& u, const Frame& v,
                                                const SearchOptions& options = {});

/**
 * Some v with q(v) = a, for possibly singular q. F_p exhaustive; Z/p^N lifts
 * an F_p solution along a unit polar direction; Q and Z_(p) bounded search.
 */
Representation find_value(const QuadraticModule& q, const Scalar& a, const SearchOptions& options = {});

}  // namespace stiefel
