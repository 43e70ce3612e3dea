#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "stiefel/profile.hpp"

namespace stiefel {

/**
 * Arithmetic inputs to the range formulas. An empty invariant means it is
 * infinite or unknown; cases needing it are rejected. `ring_formally_real`
 * exists only for the literal reading of one constant-coefficient case.
 */
struct ArithmeticInputs {
  std::optional<long> m_ring;
  std::optional<long> m_quotient;
  std::optional<long> pythagoras_residue;
  std::optional<long> pythagoras_quotient;
  bool henselian = false;
  bool ring_formally_real = false;
  bool residue_formally_real = false;
  bool quotient_formally_real = false;

  static ArithmeticInputs from_profile(const ArithmeticProfile& profile);
};

/// Where the literal statement looks mislabelled, `Corrected` uses the evident intended symbol.
enum class Reading { Literal, Corrected };

enum class StabilityTheorem { Constant, Abelian, Polynomial };

struct RangeInputs {
  long n = 0;
  /// 1-based case number: 1..8 (constant, polynomial) or 1..6 (abelian).
  unsigned case_index = 1;
  ArithmeticInputs arithmetic;
  /// Degree r of the coefficient system (polynomial case only).
  long degree = 0;
  /// Level N at which the degree holds; recorded, never used in a formula.
  long level = 0;
  Reading reading = Reading::Literal;
};

/// The map is onto for i <= surjective_bound and bijective for i <= isomorphism_bound.
struct RangeResult {
  std::string theorem;
  std::string case_label;  // "(i)".."(viii)"
  mpq_class surjective_bound;
  mpq_class isomorphism_bound;
  /// Largest integer i satisfying the inequality; negative means the range is empty.
  long surjective_up_to = 0;
  long isomorphism_up_to = 0;
  std::string formula;
  std::vector<std::string> hypotheses;
};

/// Largest integer i with i <= q.
long floor_of(const mpq_class& q);
std::string roman(unsigned k);

/// Throws DomainError when a needed invariant is missing, a hypothesis flag is
/// unset, or the henselian flag accompanies a quotient-field case.
RangeResult range_constant(const RangeInputs& in);
RangeResult range_abelian(const RangeInputs& in);
RangeResult range_polynomial(const RangeInputs& in);
RangeResult range_for(StabilityTheorem theorem, const RangeInputs& in);
unsigned case_count(StabilityTheorem theorem);

/// X(n<1>) is k-connected for every integer k <= bound.
struct ConnectivityRange {
  std::string case_label;
  mpq_class bound;
  long connected_through = 0;
  std::string formula;
  std::vector<std::string> hypotheses;
  Reading reading = Reading::Literal;
};

/// The eight connectivity ranges for X(n<1>); throws DomainError for a missing invariant or unset hypothesis.
ConnectivityRange connectivity_range(unsigned case_index, long n, const ArithmeticInputs& arithmetic,
                                     Reading reading = Reading::Literal);

/// One numbered condition under which |X_l(U^perp cap V^perp)| is a wedge of (l-1)-spheres.
struct IntersectionCase {
  std::string case_label;
  bool hypotheses_hold = false;
  std::optional<long> threshold;  // least n that satisfies the inequality
  bool satisfied = false;
};

/// All eight conditions for frames of sizes r >= s and level l; never throws.
std::vector<IntersectionCase> intersection_cases(const ArithmeticInputs& arithmetic, long n, long l, long r, long s);

/// Vanishing or stability range from one of the three headline corollaries.
struct CorollaryRange {
  unsigned corollary = 0;
  std::string item;  // "(a)".."(d)", empty for the third corollary
  mpq_class bound;
  long up_to = 0;
  std::string formula;
};

/**
 * corollary 1: exterior powers of degree `d` (items a-d); corollary 2: the
 * adjoint representation (items a-d); corollary 3: the standard module over
 * Z_(p) (no item, depends only on n).
 */
CorollaryRange intro_corollary_range(unsigned corollary, char item, long n, const ArithmeticInputs& arithmetic,
                                     long d = 0);

/// Degree bookkeeping for coefficient systems.
struct CoefficientDegree {
  long degree = -1;
  long level = 0;
};
/// Degree of a direct sum of systems with degrees at the same level.
CoefficientDegree direct_sum(const CoefficientDegree& a, const CoefficientDegree& b);

/**
 * A claim that a coefficient system has `degree` at `level`: negative degrees
 * are justified by the first rank from which the system vanishes, others by
 * claims about the kernel and cokernel of the stabilization map.
 */
struct DegreeClaim {
  long degree = -1;
  long level = 0;
  std::optional<long> vanishes_from;
  std::shared_ptr<DegreeClaim> kernel;
  std::shared_ptr<DegreeClaim> cokernel;
};

struct DegreeValidation {
  bool accepted = true;
  std::string reason;
};
DegreeValidation validate_degree_claim(const DegreeClaim& claim);

}  // namespace stiefel
