#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stiefel/complexes.hpp"
#include "stiefel/fp.hpp"
#include "stiefel/quadmod.hpp"

namespace stiefel {

/// Hard cap on stored simplices for any constructed complex.
inline constexpr std::size_t kSimplexBudget = 50'000'000;

/**
 * Every v with q(v) = 1. Over F_p: exhaustive, sorted lexicographically by
 * residues in [0, p). Over Z (identity Gram only): the 2n vectors +-e_i,
 * sorted lexicographically by integer entries. Other rings: DomainError.
 */
std::vector<Vector> unit_vectors(const QuadraticModule& q);

/// X(q) truncated at `max_dim`; vertex i of `complex` is vertices[i].
struct StiefelComplex {
  std::vector<Vector> vertices;
  SimplicialComplex complex;
  /// False when simplices above max_dim exist but were not built.
  bool complete = true;
};

/// Throws BudgetError (with counts) past `budget` simplices.
StiefelComplex build_stiefel(const QuadraticModule& q, int max_dim, std::size_t budget = kSimplexBudget);

/// X_k(q): frames of length 1..k as vertex-index sets, ordered by inclusion.
struct SkeletonPoset {
  std::vector<Vector> vertices;
  std::vector<Simplex> frames;  // element i of `poset`
  Poset poset;
};
SkeletonPoset build_skeleton_poset(const QuadraticModule& q, int k, std::size_t budget = kSimplexBudget);

/// |X_k(q)| against |sk_{k-1} X(q)| by homology.
struct SkeletonCheck {
  HomologyProfile poset_profile;
  HomologyProfile skeleton_profile;
  bool pass = false;
};
SkeletonCheck skeleton_identification_check(const QuadraticModule& q, int k, const HomologyOptions& opts = {});

/// H~_i(X(n<1>)) over F_p for i <= d against the predicted connectivity floor((n - m - 3)/3).
struct ConnectivityReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  int max_degree = 0;
  std::vector<std::size_t> simplex_counts;
  HomologyProfile profile;
  unsigned m_invariant = 0;
  long predicted_connectivity = 0;
  /// Degrees actually asserted: min(d, predicted); -2 when nothing is asserted.
  int asserted_through = -2;
  bool pass = true;
};
ConnectivityReport connectivity_report(std::uint32_t p, std::size_t n, int d, std::size_t budget = kSimplexBudget,
                                       const HomologyOptions& opts = {});

/**
 * A semi-simplicial set given by its simplices level by level, with face
 * maps d_i stored as index tables: faces[level][i][s] is the index of d_i of
 * simplex s in level - 1.
 */
struct SemiSimplicialSet {
  std::vector<std::vector<std::vector<std::uint32_t>>> simplices;
  std::vector<std::vector<std::vector<std::uint32_t>>> faces;

  std::size_t levels() const { return simplices.size(); }
  std::size_t count(std::size_t level) const { return simplices[level].size(); }
  /// d_i d_j = d_{j-1} d_i for i < j on every simplex; returns a witness on failure.
  std::optional<std::string> identity_violation() const;
};

/// Ordered frames of q up to level max_p; simplices are tuples of indices into `vertices`.
struct OrderedStiefel {
  std::vector<Vector> vertices;
  SemiSimplicialSet set;
};
OrderedStiefel build_ordered_stiefel(const QuadraticModule& q, std::size_t max_p,
                                     std::size_t budget = kSimplexBudget);

/// Hom-set description of the destabilization space against ordered frames of q (+) E^n.
struct WnCertificate {
  std::vector<std::size_t> hom_counts;    // per level
  std::vector<std::size_t> frame_counts;  // per level
  bool bijection = false;
  bool faces_compatible = false;
  bool identities_hold = false;
  bool ls1 = false;
  bool ls2 = false;
  CheckResult result;
};
/// `v` is the fixed summand (rank 0 allowed); F_p only.
WnCertificate wn_identification_check(const QuadraticModule& v, std::size_t n, std::size_t max_p,
                                      std::size_t budget = 2'000'000);

struct MorseReplayOptions {
  std::size_t sample_per_layer = 200;
  std::uint64_t seed = 0;
  /// Posets with at most this many elements are also checked in full.
  std::size_t exhaustive_limit = 20'000;
  /// Frames visited by the streaming pass.
  std::size_t stream_budget = 200'000'000;
  /// Run even when no numbered condition holds (the outcome is then informational).
  bool force = false;
  HomologyOptions homology;
};

struct MorseLayerReport {
  std::size_t size = 0;
  std::size_t checked = 0;
};

/**
 * The Morse filtration of X = X_l(U^perp cap V^perp) around the pivot u:
 * base X_0 = {[+-u]} and frames with t >= 1 vectors in W = U^perp cap V^perp
 * cap u^perp (t <= l - 1); L_1 = length-l frames inside W together with the
 * singletons [v], v not in W and v != +-u; L_i = length-i frames meeting W
 * trivially (i >= 2).
 */
struct MorseReplayReport {
  std::uint32_t p = 0;
  std::size_t n = 0, l = 0, r = 0, s = 0;
  std::vector<std::string> conditions_met;
  std::vector<std::uint32_t> pivot;
  std::size_t unit_vectors_in_complement = 0;
  std::size_t w_vectors = 0;
  std::size_t base_size = 0;
  std::size_t base_checked = 0;
  std::vector<MorseLayerReport> layers;
  HomologyProfile w_profile;  // |X_{l-1}(W)|
  std::size_t joins_checked = 0;
  bool exhaustive = false;
  std::optional<HomologyProfile> direct;
  CheckResult result;
};

/// Throws DomainError when no condition holds (unless forced) or U, V are not frames with r >= s.
MorseReplayReport morse_replay(std::uint32_t p, std::size_t n, std::size_t l,
                               const std::vector<std::vector<long>>& u_frame,
                               const std::vector<std::vector<long>>& v_frame, const MorseReplayOptions& opts = {});

/// |X_l(U^perp cap V^perp)| inside E^n over F_p, computed from the (l-1)-skeleton of the clique complex.
struct IntersectionProfile {
  std::size_t unit_vectors = 0;  // unit vectors orthogonal to U and V
  std::vector<std::size_t> simplex_counts;
  HomologyProfile profile;
};
/// U and V are lists of residue vectors; each must be a frame.
IntersectionProfile intersection_profile(std::uint32_t p, std::size_t n, std::size_t l,
                                         const std::vector<std::vector<long>>& u_frame,
                                         const std::vector<std::vector<long>>& v_frame,
                                         std::size_t budget = kSimplexBudget, const HomologyOptions& opts = {});

/// Simplicial automorphisms of X(E^n_Z) for n <= 4.
struct IntegerAutReport {
  std::size_t n = 0;
  std::size_t automorphisms = 0;
  std::size_t group_order = 0;  // 2^n n!
  bool all_lift = false;
  bool antipodes_hold = false;
  bool injective = false;
  CheckResult result;
};
IntegerAutReport integer_aut_check(std::size_t n);

}  // namespace stiefel
