#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "stiefel/error.hpp"
#include "stiefel/isometry.hpp"
#include "stiefel/stiefel.hpp"

using namespace stiefel;

namespace {

long dot_mod(const std::vector<long>& a, const std::vector<long>& b, long p) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return oracle::mod(s, p);
}

/// Maximal sets of pairwise orthogonal unit vectors of E^n over F_p, as index sets.
std::vector<std::vector<std::uint32_t>> clique_facets(const std::vector<std::vector<long>>& units, long p) {
  std::vector<std::vector<std::uint32_t>> all;
  std::vector<std::uint32_t> current;
  auto extend = [&](auto&& self, std::uint32_t from) -> void {
    if (!current.empty()) all.push_back(current);
    for (std::uint32_t v = from; v < units.size(); ++v) {
      bool ok = std::all_of(current.begin(), current.end(),
                            [&](std::uint32_t w) { return dot_mod(units[v], units[w], p) == 0; });
      if (!ok) continue;
      current.push_back(v);
      self(self, v + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
  return all;
}

/// Number of ordered (k)-tuples of pairwise orthogonal vectors of value 1 for a diagonal form.
std::size_t ordered_frames(long p, const std::vector<long>& diag, std::size_t k) {
  std::size_t n = diag.size();
  std::vector<std::vector<long>> units;
  std::vector<long> x(n, 0);
  while (true) {
    long q = 0;
    for (std::size_t i = 0; i < n; ++i) q += diag[i] * x[i] * x[i];
    if (oracle::mod(q, p) == 1) units.push_back(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == p) x[i++] = 0;
    if (i == n) break;
  }
  auto pair = [&](const std::vector<long>& a, const std::vector<long>& b) {
    long s = 0;
    for (std::size_t i = 0; i < n; ++i) s += diag[i] * a[i] * b[i];
    return oracle::mod(s, p);
  };
  std::size_t count = 0;
  std::vector<std::size_t> chosen;
  auto extend = [&](auto&& self) -> void {
    if (chosen.size() == k) {
      ++count;
      return;
    }
    for (std::size_t v = 0; v < units.size(); ++v)
      if (std::all_of(chosen.begin(), chosen.end(), [&](std::size_t w) { return pair(units[v], units[w]) == 0; })) {
        chosen.push_back(v);
        self(self);
        chosen.pop_back();
      }
  };
  extend(extend);
  return count;
}

std::vector<long> trimmed_betti(const HomologyProfile& h) {
  std::vector<long> out;
  for (int i = -1; i <= h.max_degree; ++i) out.push_back(h.betti_at(i));
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

}  // namespace

TEST_CASE("unit vectors") {
  auto F5 = RingDescriptor::finite_field(5);
  CHECK(unit_vectors(QuadraticModule::euclidean(F5, 2)).size() == 4);
  auto F3 = RingDescriptor::finite_field(3);
  CHECK(unit_vectors(QuadraticModule::euclidean(F3, 3)).size() == 6);
  for (std::size_t n = 1; n <= 5; ++n)
    CHECK(unit_vectors(QuadraticModule::euclidean(RingDescriptor::integers(), n)).size() == 2 * n);
  for (long p : {3L, 5L, 7L})
    for (std::size_t n = 1; n <= 4; ++n)
      CHECK(unit_vectors(QuadraticModule::euclidean(RingDescriptor::finite_field(static_cast<std::uint64_t>(p)), n))
                .size() == oracle::euclidean_vectors_with_value(p, n, 1).size());
  CHECK_THROWS_AS(unit_vectors(QuadraticModule::euclidean(RingDescriptor::rationals(), 2)), DomainError);
}

TEST_CASE("Stiefel complexes") {
  auto F5 = RingDescriptor::finite_field(5);
  StiefelComplex x = build_stiefel(QuadraticModule::euclidean(F5, 2), 1);
  CHECK(x.complex.count(0) == 4);
  CHECK(x.complex.count(1) == 4);
  CHECK(x.complete);

  auto Z = RingDescriptor::integers();
  StiefelComplex cross = build_stiefel(QuadraticModule::euclidean(Z, 3), 2);
  CHECK(cross.complex.count(0) == 6);
  CHECK(cross.complex.count(1) == 12);
  CHECK(cross.complex.count(2) == 8);
  CHECK(trimmed_betti(reduced_homology(cross.complex)) == std::vector<long>{0, 0, 0, 1});

  auto F3 = RingDescriptor::finite_field(3);
  StiefelComplex pts = build_stiefel(QuadraticModule::euclidean(F3, 1), 3);
  CHECK(pts.complex.count(0) == 2);
  CHECK(pts.complex.dimension() == 0);

  StiefelComplex truncated = build_stiefel(QuadraticModule::euclidean(F3, 4), 1);
  CHECK_FALSE(truncated.complete);
  CHECK_THROWS_AS(build_stiefel(QuadraticModule::euclidean(F3, 4), 3, 10), BudgetError);
}

TEST_CASE("connectivity reports") {
  for (std::uint32_t p : {3U, 5U}) {
    ConnectivityReport r = connectivity_report(p, 5, 0);
    CHECK(r.pass);
    CHECK(r.profile.betti_at(0) == 0);
    CHECK(r.profile.vanishes_through(0));
  }
  ConnectivityReport small = connectivity_report(3, 4, 3);
  auto units = oracle::euclidean_vectors_with_value(3, 4, 1);
  auto facets = clique_facets(units, 3);
  CHECK(small.simplex_counts[0] == units.size());
  CHECK(trimmed_betti(small.profile) == [&] {
    auto b = oracle::reduced_betti(facets);
    while (b.size() > 1 && b.back() == 0) b.pop_back();
    return b;
  }());
}

TEST_CASE("ordered frames match form-preserving maps") {
  auto F3 = RingDescriptor::finite_field(3);
  QuadraticModule zero = QuadraticModule::diagonal(F3, std::vector<long>{});
  WnCertificate c = wn_identification_check(zero, 3, 0);
  CHECK(c.result.pass);
  REQUIRE(c.hom_counts.size() == 1);
  CHECK(c.hom_counts[0] == 6);
  CHECK(c.frame_counts[0] == 6);

  auto F5 = RingDescriptor::finite_field(5);
  WnCertificate d = wn_identification_check(QuadraticModule::diagonal(F5, {2}), 3, 1);
  CHECK(d.bijection);
  CHECK(d.faces_compatible);
  CHECK(d.identities_hold);
  CHECK(d.result.pass);
  CHECK(d.hom_counts[0] == ordered_frames(5, {2, 1, 1, 1}, 1));
  CHECK(d.hom_counts[1] == ordered_frames(5, {2, 1, 1, 1}, 2));

  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t level = 0; level <= 1; ++level) {
      WnCertificate e = wn_identification_check(QuadraticModule::diagonal(F3, {1}), n, level);
      CHECK(e.result.pass);
      CHECK(e.frame_counts[level] == ordered_frames(3, std::vector<long>(n + 1, 1), level + 1));
    }
  CHECK_THROWS_AS(wn_identification_check(zero, 0, 0), DomainError);
}

TEST_CASE("ordered Stiefel sets satisfy the semi-simplicial identities") {
  auto F3 = RingDescriptor::finite_field(3);
  for (std::size_t n = 2; n <= 4; ++n) {
    OrderedStiefel o = build_ordered_stiefel(QuadraticModule::euclidean(F3, n), 2);
    CHECK_FALSE(o.set.identity_violation().has_value());
    for (std::size_t level = 0; level < o.set.levels(); ++level)
      CHECK(o.set.count(level) == ordered_frames(3, std::vector<long>(n, 1), level + 1));
  }
  // A face table that breaks d_0 d_1 = d_0 d_0 on a 2-simplex.
  SemiSimplicialSet broken;
  broken.simplices = {{{0}, {1}, {2}}, {{0, 1}, {1, 2}}, {{0, 1, 2}}};
  broken.faces = {{}, {{1, 2}, {0, 1}}, {{1}, {0}, {0}}};
  CHECK(broken.identity_violation().has_value());
}

TEST_CASE("Morse replays") {
  MorseReplayOptions opts;
  MorseReplayReport small = morse_replay(3, 5, 2, {}, {}, opts);
  CHECK(small.result.pass);
  CHECK(small.exhaustive);
  REQUIRE(small.direct);
  // |X_2(E^5)| is the orthogonality graph of unit vectors: H1 = E - V + 1 when connected.
  auto units = oracle::euclidean_vectors_with_value(3, 5, 1);
  long edges = 0;
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j) edges += dot_mod(units[i], units[j], 3) == 0;
  CHECK(small.direct->betti_at(0) == 0);
  CHECK(small.direct->betti_at(1) == edges - static_cast<long>(units.size()) + 1);

  MorseReplayReport discrete = morse_replay(3, 4, 1, {}, {}, opts);
  CHECK(discrete.result.pass);
  REQUIRE(discrete.direct);
  CHECK(discrete.direct->betti_at(0) == static_cast<long>(oracle::euclidean_vectors_with_value(3, 4, 1).size()) - 1);

  // U = <e_1> inside E^5 leaves E^4: the same replay as above.
  MorseReplayReport shifted = morse_replay(3, 5, 1, {{1, 0, 0, 0, 0}}, {}, opts);
  CHECK(shifted.direct->same_groups(*discrete.direct));

  CHECK_THROWS_AS(morse_replay(5, 6, 2, {{1, 0, 0, 0, 0, 0}}, {}, opts), DomainError);
  MorseReplayOptions forced = opts;
  forced.force = true;
  MorseReplayReport f = morse_replay(5, 6, 2, {{1, 0, 0, 0, 0, 0}}, {}, forced);
  CHECK(f.conditions_met.empty());
  MorseReplayReport seven = morse_replay(5, 7, 2, {{1, 0, 0, 0, 0, 0, 0}}, {}, opts);
  CHECK_FALSE(seven.conditions_met.empty());
  CHECK(seven.result.pass);
  CHECK_FALSE(seven.exhaustive);
}

TEST_CASE("automorphisms of the integral cross-polytope") {
  std::size_t expected[] = {0, 2, 8, 48, 384};
  for (std::size_t n = 1; n <= 4; ++n) {
    IntegerAutReport r = integer_aut_check(n);
    CHECK(r.result.pass);
    CHECK(r.automorphisms == expected[n]);
    CHECK(r.group_order == expected[n]);
    CHECK(r.all_lift);
    CHECK(r.antipodes_hold);
    CHECK(r.injective);
  }
}

TEST_CASE("property: isometries permute simplices") {
  auto F3 = RingDescriptor::finite_field(3);
  auto e3 = QuadraticModule::euclidean(F3, 3);
  StiefelComplex x = build_stiefel(e3, 2);
  std::set<Simplex> simplices;
  for (int d = 0; d <= x.complex.dimension(); ++d)
    for (std::size_t i = 0; i < x.complex.count(d); ++i) simplices.insert(x.complex.simplex(d, i));
  auto index_of = [&](const Vector& v) {
    auto it = std::find(x.vertices.begin(), x.vertices.end(), v);
    REQUIRE(it != x.vertices.end());
    return static_cast<std::uint32_t>(it - x.vertices.begin());
  };
  FiniteOrthogonalGroup g = enumerate_group(e3);
  oracle::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Isometry phi = g.element(static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(g.order()) - 1)));
    for (const Simplex& s : simplices) {
      Simplex image;
      for (std::uint32_t v : s) image.push_back(index_of(phi.apply(x.vertices[v])));
      std::sort(image.begin(), image.end());
      CHECK(simplices.count(image) == 1);
    }
  }
}

TEST_CASE("property: frame posets and skeleta have the same homology") {
  struct Case {
    std::uint64_t p;
    std::size_t n;
    int k;
  };
  for (Case c : {Case{3, 3, 2}, Case{3, 4, 2}, Case{3, 4, 3}, Case{5, 3, 2}, Case{5, 2, 2}, Case{7, 2, 1}}) {
    SkeletonCheck s = skeleton_identification_check(QuadraticModule::euclidean(RingDescriptor::finite_field(c.p), c.n), c.k);
    CHECK(s.pass);
    CHECK(s.poset_profile.same_groups(s.skeleton_profile));
  }
  SkeletonCheck z = skeleton_identification_check(QuadraticModule::euclidean(RingDescriptor::integers(), 3), 3);
  CHECK(z.pass);
  CHECK(z.skeleton_profile.betti_at(2) == 1);
}
