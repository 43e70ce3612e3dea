#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace stiefel {

using Simplex = std::vector<std::uint32_t>;

/**
 * A finite abstract simplicial complex on vertices 0..vertex_count-1.
 *
 * Simplices of each dimension are stored flattened, dim+1 strictly increasing
 * vertex indices per simplex, lexicographically sorted without duplicates.
 * Every vertex is a 0-simplex. `complete_through()` records the highest
 * dimension known to be fully present; builders that truncate a larger complex
 * lower it so homology above the truncation is refused rather than wrong.
 */
class SimplicialComplex {
 public:
  static constexpr int kComplete = 1 << 20;

  explicit SimplicialComplex(std::size_t vertex_count = 0);
  /// Downward closure of `facets`; complete in every dimension.
  static SimplicialComplex from_facets(std::size_t vertex_count, const std::vector<Simplex>& facets);

  std::size_t vertex_count() const { return vertex_count_; }
  /// -1 for the empty complex.
  int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
  std::size_t count(int dim) const;
  std::size_t total() const;
  const std::vector<std::uint32_t>& flat(int dim) const;
  Simplex simplex(int dim, std::size_t i) const;
  std::optional<std::size_t> index_of(int dim, const std::uint32_t* vertices) const;

  /// Replaces the simplices of dimension dim >= 1; sorts and removes duplicates.
  void set_simplices(int dim, std::vector<std::uint32_t> flat);
  int complete_through() const { return complete_through_; }
  void set_complete_through(int dim) { complete_through_ = dim; }

  bool is_downward_closed() const;
  SimplicialComplex skeleton(int dim) const;

 private:
  std::size_t vertex_count_;
  std::vector<std::vector<std::uint32_t>> simplices_;
  int complete_through_ = kComplete;
};

/**
 * A finite strict partial order on 0..size-1. Relations are recorded with
 * add_relation and sealed with close(); after that above(a) lists every b with
 * a < b in increasing order.
 */
class Poset {
 public:
  enum class Closure { Compute, AlreadyTransitive };

  explicit Poset(std::size_t size = 0);

  std::size_t size() const { return above_.size(); }
  void add_relation(std::uint32_t smaller, std::uint32_t larger);
  /// Throws DomainError for a reflexive pair or a cycle.
  void close(Closure mode = Closure::Compute);

  const std::vector<std::uint32_t>& above(std::uint32_t a) const { return above_[a]; }
  const std::vector<std::uint32_t>& below(std::uint32_t a) const { return below_[a]; }
  bool less(std::uint32_t a, std::uint32_t b) const;
  bool comparable(std::uint32_t a, std::uint32_t b) const { return less(a, b) || less(b, a); }
  std::size_t relation_count() const;

  /// The subposet on `elements` (sorted, distinct); element i of the result is elements[i].
  Poset induced(const std::vector<std::uint32_t>& elements) const;
  /// Elements comparable to and distinct from x, sorted.
  std::vector<std::uint32_t> link(std::uint32_t x) const;

 private:
  std::vector<std::vector<std::uint32_t>> above_;
  std::vector<std::vector<std::uint32_t>> below_;
  bool closed_ = false;
};

/// Simplices ordered by proper inclusion, indexed dimension by dimension.
Poset face_poset(const SimplicialComplex& k);

/// Chains of P as simplices. Throws BudgetError past `cap` chains.
SimplicialComplex order_complex(const Poset& p, std::size_t cap = 50'000'000);

struct SmithForm {
  /// Nonzero invariant factors d_1 | d_2 | ... | d_r, all positive.
  std::vector<mpz_class> invariants;
  /// U (rows x rows) and V (cols x cols), unimodular, with U M V diagonal.
  std::optional<std::vector<std::vector<mpz_class>>> left, right;
};

/// Smith normal form of a rows x cols integer matrix given row by row.
SmithForm smith_normal_form(const std::vector<std::vector<mpz_class>>& m, bool with_transforms = false);

struct HomologyOptions {
  /// Boundary matrices with at most this many columns are reduced densely.
  std::size_t dense_cutoff = 2000;
};

/// Reduced integral homology in degrees -1..max_degree.
struct HomologyProfile {
  int max_degree = -1;
  std::vector<long> betti;
  std::vector<std::vector<mpz_class>> torsion;

  long betti_at(int degree) const;
  const std::vector<mpz_class>& torsion_at(int degree) const;
  bool torsion_free() const;
  /// Every reduced group vanishes except possibly a free one in degree d.
  bool is_wedge_of_spheres(int d) const;
  /// H~_i = 0 for all i <= k.
  bool vanishes_through(int k) const;
  std::string to_string() const;
  /// Same groups in every degree, reading degrees past max_degree as zero.
  bool same_groups(const HomologyProfile& other) const;

  friend bool operator==(const HomologyProfile& a, const HomologyProfile& b) {
    return a.max_degree == b.max_degree && a.betti == b.betti && a.torsion == b.torsion;
  }
};

/**
 * H~_i(K) for i <= max_degree (every degree when max_degree is omitted).
 * Throws DomainError when K is not known to be complete through
 * dimension max_degree + 1. b~_0 is cross-checked against a union-find count.
 */
HomologyProfile reduced_homology(const SimplicialComplex& k, std::optional<int> max_degree = std::nullopt,
                                 const HomologyOptions& opts = {});

/// Homology of the order complex of P in every degree.
HomologyProfile poset_homology(const Poset& p, const HomologyOptions& opts = {});

/// Outcome of a certificate check; `failure` names the clause and a witness.
struct CheckResult {
  bool pass = true;
  std::string failure;

  void fail(std::string why) {
    if (pass) {
      pass = false;
      failure = std::move(why);
    }
  }
};

struct DeformationCertificate {
  CheckResult result;
  std::vector<std::uint32_t> image;
  HomologyProfile whole;
  HomologyProfile image_profile;
};

/// f monotone with f(x) <= x, and |P| and |f(P)| with equal homology.
DeformationCertificate closure_deformation_check(const Poset& p, const std::vector<std::uint32_t>& f,
                                                 const HomologyOptions& opts = {});

struct JoinCertificate {
  CheckResult result;
  HomologyProfile lower, upper, whole;
  std::vector<long> predicted_betti;
  bool integral_checked = false;
};

/// P = Y disjoint-union Z with y < z throughout; |P| against the join formula for |Y| * |Z|.
JoinCertificate poset_join_check(const Poset& p, const std::vector<std::uint32_t>& lower,
                                 const std::vector<std::uint32_t>& upper, const HomologyOptions& opts = {});

/// Reduced Betti numbers of a join from those of the factors (degree -1 first).
std::vector<long> join_betti(const HomologyProfile& a, const HomologyProfile& b);

struct MorseDecomposition {
  std::vector<std::uint32_t> base;
  std::vector<std::vector<std::uint32_t>> layers;
};

struct MorseOptions {
  /// Links checked per layer; 0 checks every element.
  std::size_t sample_per_layer = 0;
  std::uint64_t seed = 0;
  /// Largest order complex (in chains) for the direct cross-check.
  std::size_t direct_budget = 2'000'000;
  HomologyOptions homology;
};

struct LayerReport {
  std::size_t size = 0;
  std::size_t checked = 0;
};

struct MorseCertificate {
  CheckResult result;
  HomologyProfile base_profile;
  std::vector<LayerReport> layers;
  /// Every link was checked and every clause held.
  bool fully_verified = false;
  std::optional<HomologyProfile> direct;
};

/**
 * Checks the three hypotheses of the discrete Morse lemma for X = base plus
 * layers with sphere dimension d, then cross-checks |X| directly when every
 * link was examined and the order complex fits `direct_budget`.
 */
MorseCertificate morse_lemma_check(const Poset& x, const MorseDecomposition& dec, int d,
                                   const MorseOptions& opts = {});

}  // namespace stiefel
