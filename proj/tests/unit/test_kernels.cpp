#include <doctest.h>

#include "oracles.hpp"
#include "stiefel/fp.hpp"
#include "stiefel/kernels.hpp"

using namespace stiefel;
using kernels::Backend;

namespace {

std::vector<std::uint32_t> random_residues(oracle::Rng& rng, std::size_t count, std::uint32_t p) {
  std::vector<std::uint32_t> out(count);
  for (auto& x : out) x = static_cast<std::uint32_t>(oracle::uniform(rng, 0, p - 1));
  return out;
}

}  // namespace

TEST_CASE("scalar kernels against direct evaluation") {
  oracle::Rng rng(11);
  for (std::uint32_t p : {2U, 3U, 7U, 251U}) {
    std::size_t dim = 5, count = 37, stride = 40;
    auto soa = random_residues(rng, dim * stride, p);
    auto weights = random_residues(rng, dim, p);
    auto gram = random_residues(rng, dim * dim, p);
    std::vector<std::uint32_t> dots(count), values(count);
    kernels::dot_mod(Backend::Scalar, soa.data(), stride, count, dim, weights.data(), p, dots.data());
    kernels::quadratic_form_mod(Backend::Scalar, soa.data(), stride, count, dim, gram.data(), p, values.data());
    for (std::size_t i = 0; i < count; ++i) {
      long d = 0, q = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        d += static_cast<long>(soa[j * stride + i]) * weights[j];
        for (std::size_t k = 0; k < dim; ++k)
          q += static_cast<long>(soa[j * stride + i]) * gram[j * dim + k] * soa[k * stride + i];
      }
      CHECK(dots[i] == oracle::mod(d, p));
      CHECK(values[i] == oracle::mod(q, p));
    }
  }
}

TEST_CASE("property: AVX2 kernels are bit-identical to the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  oracle::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = static_cast<std::uint32_t>(std::vector<long>{2, 3, 5, 7, 13, 101, 251}[trial % 7]);
    auto dim = static_cast<std::size_t>(oracle::uniform(rng, 1, static_cast<long>(kernels::kMaxDim)));
    // Counts straddle the 8-lane width so tails are exercised.
    auto count = static_cast<std::size_t>(oracle::uniform(rng, 0, 67));
    std::size_t stride = count + static_cast<std::size_t>(oracle::uniform(rng, 0, 5));
    auto soa = random_residues(rng, dim * std::max<std::size_t>(stride, 1), p);
    auto weights = random_residues(rng, dim, p);
    auto gram = random_residues(rng, dim * dim, p);
    std::vector<std::uint32_t> a(count), b(count), qa(count), qb(count);
    kernels::detail::dot_mod_scalar(soa.data(), stride, count, dim, weights.data(), p, a.data());
    kernels::detail::dot_mod_avx2(soa.data(), stride, count, dim, weights.data(), p, b.data());
    CHECK(a == b);
    kernels::detail::quadratic_form_mod_scalar(soa.data(), stride, count, dim, gram.data(), p, qa.data());
    kernels::detail::quadratic_form_mod_avx2(soa.data(), stride, count, dim, gram.data(), p, qb.data());
    CHECK(qa == qb);
  }
}

TEST_CASE("property: sweeps and orthogonality graphs agree across backends") {
  for (std::uint32_t p : {3U, 5U, 7U})
    for (std::size_t n = 1; n <= 4; ++n) {
      fp::Form form = fp::Form::euclidean(fp::Field(p), n);
      fp::VectorTable scalar = fp::vectors_with_value(form, 1, Backend::Scalar);
      CHECK(scalar.size() == oracle::euclidean_vectors_with_value(p, n, 1).size());
      if (!kernels::avx2_supported()) continue;
      fp::VectorTable simd = fp::vectors_with_value(form, 1, Backend::Avx2);
      REQUIRE(simd.size() == scalar.size());
      for (std::size_t i = 0; i < scalar.size(); ++i)
        CHECK(std::equal(scalar[i], scalar[i] + n, simd[i]));
      fp::OrthogonalityGraph gs = fp::orthogonality_graph(form, scalar, Backend::Scalar);
      fp::OrthogonalityGraph ga = fp::orthogonality_graph(form, scalar, Backend::Avx2);
      for (std::size_t i = 0; i < gs.size(); ++i)
        CHECK(std::equal(gs.row(i), gs.row(i) + gs.words(), ga.row(i)));
    }
  CHECK(std::string(kernels::backend_name(Backend::Scalar)) == "scalar");
}
