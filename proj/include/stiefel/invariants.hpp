#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stiefel/quadmod.hpp"

namespace stiefel {

/// An invariant value: exact, or only known to be at least `value`.
struct InvariantValue {
  enum class Kind { Exact, AtLeast };
  Kind kind = Kind::Exact;
  unsigned value = 0;
  std::string certificate;

  static InvariantValue exact(unsigned v, std::string why) { return {Kind::Exact, v, std::move(why)}; }
  static InvariantValue at_least(unsigned v, std::string why) { return {Kind::AtLeast, v, std::move(why)}; }
  bool is_exact() const { return kind == Kind::Exact; }
  std::string to_string() const;
};

/// Pythagoras number, Stufe, u-invariant and m-invariant of one ring.
struct InvariantReport {
  RingDescriptor ring;
  InvariantValue pythagoras;
  InvariantValue stufe;
  InvariantValue u_invariant;
  InvariantValue m_invariant;
  long search_bound = 0;  // height bound used over Q and Z_(p)
  std::string to_string() const;
};

struct InvariantOptions {
  long height_bound = 50;    // sums of squares over Q and Z_(p)
  unsigned max_squares = 6;  // largest k tried in S_k searches over infinite rings
  unsigned max_form_rank = 4;
};

/**
 * F_p: all four invariants exactly, by exhausting sums of squares and
 * diagonal forms. Z/p^N: P and s exactly on the finite ring; u and m over
 * diagonal forms with square-class representative entries, decided by the
 * Hensel-based solvers. Q and Z_(p): bounded-search lower bounds.
 */
InvariantReport compute_invariants(const RingDescriptor& ring, const InvariantOptions& options = {});

struct InequalityCheck {
  std::string name;
  enum class Outcome { Holds, Fails, Undetermined } outcome = Outcome::Undetermined;
  std::string detail;
};

struct InequalityLedger {
  std::vector<InequalityCheck> checks;
  /// No check failed (undetermined checks are allowed).
  bool consistent() const;
  std::size_t count(InequalityCheck::Outcome o) const;
  std::string to_string() const;
};

/**
 * Evaluates P <= m, P <= s+1, s <= u, m <= u on every report, the residue
 * comparisons m_k <= m_A, P(k) <= P(A), s(k) <= s(A), u(k) <= u(A), and the
 * equalities of m, s, u when A is henselian. `quotient` is optional.
 * Throws DomainError unless `residue` is the residue field of `ring`.
 */
InequalityLedger check_inequalities(const InvariantReport& ring, const InvariantReport& residue,
                                    const std::optional<InvariantReport>& quotient = std::nullopt);

/// Evidence that m_{Z_(p)} >= 4 using the value 7.
struct MzpWitness {
  std::uint64_t p = 0;
  long height = 0;
  std::vector<long> lagrange;                // r with r_1^2 + ... + r_4^2 = 7
  bool inverse_is_four_squares = false;      // sum (r_j/7)^2 == 1/7 in Z_(p)
  bool embedding_verified = false;           // 3<1/7> sits non-singularly in E^12
  bool no_rational_triple_within_height = false;
  bool no_integer_triple = false;            // exhaustive over |x| <= 2
  Matrix embedding;                          // 12 x 3, columns span 3<1/7>
  bool concludes_m_at_least_4() const {
    return inverse_is_four_squares && embedding_verified && no_rational_triple_within_height && no_integer_triple;
  }
  std::string to_string() const;
};

/// Throws DomainError when p is not an odd prime, p == 7, or height < 1.
MzpWitness m_zp_witness(std::uint64_t p, long height);

/// Unit vectors in e^perp cap f^perp for every pair of unit vectors e, f of E^n, n in [k, k+2].
struct ShapiroReport {
  std::uint64_t p = 0;
  unsigned k = 0;
  std::vector<bool> hypothesis_by_n;  // index i is n = k + i
  bool orbit_reduced = false;         // e fixed to e_1 when the unit sphere is large
  unsigned pythagoras = 0;
  bool hypothesis_holds() const;
  /// The implication "hypothesis => P <= k - 2" is not contradicted.
  bool ok() const { return !hypothesis_holds() || pythagoras + 2 <= k; }
};

/// Throws DomainError for F_3 (the claim is false there) and for non-fields.
ShapiroReport shapiro_bound_check(const RingDescriptor& field, unsigned k);

}  // namespace stiefel
