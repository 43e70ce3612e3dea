#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stiefel/complexes.hpp"
#include "stiefel/rings.hpp"

/// Exhaustive and seed-fixed sweeps over the solvers and isometry tools.
namespace stiefel {

/// frame_transport on every ordered pair of ordered k-frames of E^n over F_p.
struct HomogeneityReport {
  std::uint32_t p = 0;
  std::size_t n = 0, k = 0;
  std::size_t frames = 0;
  std::size_t pairs = 0;
  CheckResult result;
};
HomogeneityReport homogeneity_check(std::uint32_t p, std::size_t n, std::size_t k);

/// Every element of O(E^n) over F_p fixing e_n restricts to E^{n-1} and extends back to itself.
struct StabilizerReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  std::size_t group_order = 0;
  std::size_t stabilizer_order = 0;
  CheckResult result;
};
StabilizerReport stabilizer_check(std::uint32_t p, std::size_t n);

/// Reflection factorizations of isometries, each re-multiplied and compared exactly.
struct FactorizationReport {
  std::string ring;
  std::size_t n = 0;
  std::size_t isometries = 0;
  std::size_t longest = 0;  // most reflections used by one factorization
  CheckResult result;
};
/// Every element of O(E^n) over F_p.
FactorizationReport factor_orthogonal_group(std::uint32_t p, std::size_t n);
/// `count` products of random reflections of E^n over Z_(p) with small integer vectors.
FactorizationReport factor_random_isometries(std::uint64_t p, std::size_t n, std::size_t count, std::uint64_t seed);

/// represents(q, a) against isotropy of q (+) <-a> over all unit diagonal forms of rank <= max_rank.
struct RepresentationSweep {
  std::uint32_t p = 0;
  std::size_t max_rank = 0;
  std::size_t cases = 0;
  std::size_t represented = 0;
  std::size_t discrepancies = 0;
  CheckResult result;
};
RepresentationSweep representation_equivalence(std::uint32_t p, std::size_t max_rank);

/// Random non-singular forms over Z/p^N with isotropic reduction, each solved and checked mod p^N.
struct HenselCase {
  std::vector<std::vector<long>> gram;
  std::vector<long> witness;
  bool verified = false;
};
struct HenselReport {
  std::uint64_t p = 0;
  unsigned precision = 0;
  std::size_t drawn = 0;  // forms generated, including rejected ones
  std::vector<HenselCase> cases;
  CheckResult result;
};
HenselReport hensel_replay(std::uint64_t p, unsigned precision, std::size_t count, std::uint64_t seed);

/// The fixed 200-point grid over every range formula, as TSV with a header line.
std::string range_grid_tsv();

}  // namespace stiefel
