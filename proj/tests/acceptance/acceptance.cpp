// Runs the twelve acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes within its time limit.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stiefel/error.hpp"
#include "stiefel/experiments.hpp"
#include "stiefel/fp.hpp"
#include "stiefel/invariants.hpp"
#include "stiefel/isometry.hpp"
#include "stiefel/stability.hpp"
#include "stiefel/stiefel.hpp"

using namespace stiefel;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::vector<std::vector<long>> draw_frame(const fp::VectorTable& units, std::size_t r, std::mt19937_64& rng,
                                          const fp::Form& form) {
  // Rejection sampling of r pairwise orthogonal unit vectors.
  std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
  while (true) {
    std::vector<std::size_t> chosen;
    for (std::size_t attempt = 0; chosen.size() < r && attempt < 1000; ++attempt) {
      std::size_t c = pick(rng);
      bool ok = true;
      for (std::size_t d : chosen) ok = ok && form.gram_product(units[c], units[d]) == 0;
      if (ok) chosen.push_back(c);
    }
    if (chosen.size() < r) continue;
    std::vector<std::vector<long>> frame;
    for (std::size_t c : chosen) frame.emplace_back(units[c], units[c] + units.dim());
    return frame;
  }
}

Outcome check_invariant_table() {
  Outcome o;
  for (std::uint64_t p : {3, 5, 7, 11, 13}) {
    InvariantReport r = compute_invariants(RingDescriptor::finite_field(p));
    unsigned stufe = p % 4 == 1 ? 1 : 2;
    bool ok = r.pythagoras.value == 2 && r.u_invariant.value == 2 && r.m_invariant.value == 2 &&
              r.stufe.value == stufe && r.pythagoras.is_exact() && r.stufe.is_exact() &&
              r.u_invariant.is_exact() && r.m_invariant.is_exact();
    o.require(ok, r.to_string());
  }
  o.detail = o.pass ? "P = u = m = 2 and s = 1 iff p = 1 mod 4, p in {3,5,7,11,13}" : o.detail;
  return o;
}

Outcome check_connectivity() {
  Outcome o;
  std::ostringstream counts;
  for (std::uint32_t p : {3U, 5U})
    for (std::size_t n : {5U, 6U, 7U}) {
      ConnectivityReport r = connectivity_report(p, n, 0);
      o.require(r.pass && r.profile.betti_at(0) == 0,
                "F" + std::to_string(p) + " n=" + std::to_string(n) + ": " + r.profile.to_string());
      counts << " F" << p << "/n" << n << ":" << r.simplex_counts[0] << "v";
    }
  if (o.pass) o.detail = "reduced H0 = 0 for" + counts.str();
  return o;
}

Outcome check_graph_sphericity() {
  Outcome o;
  fp::Form form = fp::Form::euclidean(fp::Field(3), 8);
  fp::VectorTable units = fp::vectors_with_value(form, 1);
  std::mt19937_64 rng(0);
  std::ostringstream detail;
  for (auto [r, s] : {std::pair<std::size_t, std::size_t>{0, 0}, {1, 0}, {1, 1}}) {
    auto u = draw_frame(units, r, rng, form);
    auto v = draw_frame(units, s, rng, form);
    IntersectionProfile ip = intersection_profile(3, 8, 2, u, v);
    o.require(ip.profile.betti_at(-1) == 0 && ip.profile.betti_at(0) == 0,
              "(r,s)=(" + std::to_string(r) + "," + std::to_string(s) + "): " + ip.profile.to_string());
    detail << " (" << r << "," << s << "):" << ip.unit_vectors << "v/H0=" << ip.profile.betti_at(0);
  }
  if (o.pass) o.detail = "connected" + detail.str();
  return o;
}

Outcome check_morse() {
  Outcome o;
  MorseReplayOptions opts;
  opts.sample_per_layer = 200;
  opts.seed = 0;
  MorseReplayReport r = morse_replay(3, 8, 3, {}, {}, opts);
  o.require(r.result.pass, r.result.failure);
  o.require(!r.conditions_met.empty(), "no numbered condition holds");
  std::size_t sampled = r.base_checked;
  for (const auto& layer : r.layers) {
    o.require(layer.checked >= std::min<std::size_t>(200, layer.size), "a layer had fewer than 200 sampled links");
    sampled += layer.checked;
  }
  if (o.pass)
    o.detail = std::to_string(r.layers.size()) + " layers, " + std::to_string(sampled) + " elements and " +
               std::to_string(r.joins_checked) + " joins checked, zero failures";
  return o;
}

Outcome check_representation() {
  Outcome o;
  std::size_t cases = 0;
  for (std::uint32_t p : {3U, 5U}) {
    RepresentationSweep s = representation_equivalence(p, 3);
    o.require(s.result.pass && s.discrepancies == 0, "F" + std::to_string(p) + ": " + s.result.failure);
    cases += s.cases;
  }
  if (o.pass) o.detail = std::to_string(cases) + " (form, unit) pairs, zero discrepancies";
  return o;
}

Outcome check_cartan_dieudonne() {
  Outcome o;
  std::size_t total = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    FactorizationReport r = factor_orthogonal_group(3, n);
    o.require(r.result.pass && r.longest <= 2 * n, "O_" + std::to_string(n) + "(F3): " + r.result.failure);
    total += r.isometries;
  }
  FactorizationReport z = factor_random_isometries(5, 3, 100, 0);
  o.require(z.result.pass && z.isometries == 100 && z.longest <= 6, "Z_(5): " + z.result.failure);
  if (o.pass)
    o.detail = std::to_string(total) + " elements of O_n(F3), n <= 3, and 100 isometries over Z_(5) round-trip";
  return o;
}

Outcome check_homogeneity() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::uint32_t p : {3U, 5U})
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t k = 1; k <= std::min<std::size_t>(2, n); ++k) {
        HomogeneityReport h = homogeneity_check(p, n, k);
        o.require(h.result.pass, h.result.failure);
        pairs += h.pairs;
      }
  StabilizerReport s = stabilizer_check(3, 3);
  o.require(s.result.pass, "stabilizer: " + s.result.failure);
  if (o.pass)
    o.detail = std::to_string(pairs) + " frame pairs transported; " + std::to_string(s.stabilizer_order) +
               " stabilizer elements of O_3(F3) round-trip";
  return o;
}

Outcome check_wn_identification() {
  Outcome o;
  auto F3 = RingDescriptor::finite_field(3);
  std::size_t checks = 0;
  for (const QuadraticModule& v : {QuadraticModule::diagonal(F3, std::vector<long>{}), QuadraticModule::diagonal(F3, {1}),
                                   QuadraticModule::diagonal(F3, {2})})
    for (std::size_t n = 1; n <= 3; ++n) {
      WnCertificate c = wn_identification_check(v, n, 1);
      o.require(c.result.pass && c.bijection && c.faces_compatible,
                "rank " + std::to_string(v.rank()) + " n=" + std::to_string(n) + ": " + c.result.failure);
      ++checks;
    }
  if (o.pass) o.detail = std::to_string(checks) + " (V, n) pairs: bijection and face maps agree for p <= 1";
  return o;
}

Outcome check_integer_automorphisms() {
  Outcome o;
  std::size_t expected = 1;
  for (std::size_t n = 1; n <= 4; ++n) {
    expected *= 2 * n;
    IntegerAutReport r = integer_aut_check(n);
    o.require(r.result.pass && r.automorphisms == expected,
              "n=" + std::to_string(n) + ": " + std::to_string(r.automorphisms) + " automorphisms");
  }
  if (o.pass) o.detail = "2, 8, 48, 384 automorphisms for n = 1..4";
  return o;
}

Outcome check_m_witness() {
  Outcome o;
  MzpWitness w = m_zp_witness(5, 50);
  o.require(w.inverse_is_four_squares, "1/7 not shown to be a sum of four squares");
  o.require(w.no_rational_triple_within_height, "a unit vector in 3<1/7> exists at height <= 50");
  bool triple = false;
  for (long a = 0; a * a <= 7; ++a)
    for (long b = 0; b * b <= 7; ++b)
      for (long c = 0; c * c <= 7; ++c) triple = triple || a * a + b * b + c * c == 7;
  o.require(!triple && w.no_integer_triple, "7 is a sum of three integer squares");
  o.require(w.concludes_m_at_least_4(), w.to_string());
  if (o.pass) o.detail = "1/7 is four squares in Z_(5); no unit vector in 3<1/7> at height <= 50";
  return o;
}

Outcome check_range_formulas() {
  Outcome o;
  std::ifstream in(STIEFEL_GOLDEN_DIR "/ranges.tsv");
  std::stringstream golden;
  golden << in.rdbuf();
  std::string grid = range_grid_tsv();
  o.require(in.good() || !golden.str().empty(), "golden table missing");
  o.require(grid == golden.str(), "grid differs from the golden table");
  auto lines = static_cast<std::size_t>(std::count(grid.begin(), grid.end(), '\n'));
  o.require(lines == 201, "grid has " + std::to_string(lines - 1) + " rows");

  o.require(intro_corollary_range(3, 'a', 20, ArithmeticInputs{}).up_to == 6, "corollary 3 at n = 20");
  RangeInputs a;
  a.n = 20;
  a.case_index = 1;
  a.arithmetic.m_ring = 4;
  RangeResult c = range_constant(a);
  o.require(c.surjective_up_to == 5 && c.isomorphism_up_to == 4, "constant (i) at n = 20, m = 4");
  RangeResult ab = range_abelian(a);
  o.require(ab.surjective_bound == mpq_class(14, 3), "abelian (i) at n = 20, m = 4");
  a.n = 26;
  a.degree = 1;
  o.require(range_polynomial(a).surjective_up_to == 6, "polynomial (i) at n = 26, r = 1");
  if (o.pass) o.detail = "200 rows equal the golden table; spot checks hold";
  return o;
}

Outcome check_hensel() {
  Outcome o;
  HenselReport r = hensel_replay(5, 4, 50, 0);
  o.require(r.result.pass && r.cases.size() == 50, r.result.failure);
  std::size_t verified = 0;
  for (const auto& c : r.cases) verified += c.verified;
  o.require(verified == 50, std::to_string(verified) + " of 50 witnesses verified");
  if (o.pass) o.detail = "50 forms over Z/5^4 isotropic, witnesses verified mod 625";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "invariant table", 5, check_invariant_table},
      {2, "connectivity at the predicted bound", 360, check_connectivity},
      {3, "graph-level sphericity over F3, n = 8", 120, check_graph_sphericity},
      {4, "Morse replay, F3, n = 8, l = 3", 600, check_morse},
      {5, "representation equivalence", 30, check_representation},
      {6, "Cartan-Dieudonne round-trip", 60, check_cartan_dieudonne},
      {7, "homogeneity and stabilizers", 120, check_homogeneity},
      {8, "ordered frames as form-preserving maps", 60, check_wn_identification},
      {9, "integer automorphisms", 30, check_integer_automorphisms},
      {10, "m-invariant witness over Z_(5)", 60, check_m_witness},
      {11, "range formulas", 1, check_range_formulas},
      {12, "Hensel replay", 30, check_hensel},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && seconds > c.limit_seconds) {
      o.pass = false;
      o.detail = "over the time limit of " + std::to_string(static_cast<int>(c.limit_seconds)) + " s";
    }
    failures += !o.pass;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " [" << c.name << "] ("
              << std::fixed;
    std::cout.precision(2);
    std::cout << seconds << " s) " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
