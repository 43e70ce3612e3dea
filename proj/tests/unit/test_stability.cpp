#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stiefel/error.hpp"
#include "stiefel/experiments.hpp"
#include "stiefel/stability.hpp"

using namespace stiefel;

namespace {

ArithmeticInputs uniform(long v, bool henselian) {
  ArithmeticInputs a;
  a.m_ring = a.m_quotient = a.pythagoras_residue = a.pythagoras_quotient = v;
  a.henselian = henselian;
  a.ring_formally_real = a.residue_formally_real = a.quotient_formally_real = true;
  return a;
}

RangeResult range(StabilityTheorem t, unsigned c, long n, long v, long degree = 0) {
  RangeInputs in;
  in.n = n;
  in.case_index = c;
  in.degree = degree;
  // Ring-side cases take the henselian flag; quotient-side cases refuse it.
  bool ring_side = t == StabilityTheorem::Abelian ? c <= 3 : c <= 4;
  in.arithmetic = uniform(v, ring_side);
  return range_for(t, in);
}

/// Integer range with every empty range identified: below 0 reads as -1.
long clamp(long up_to) { return std::max(up_to, -1L); }

}  // namespace

TEST_CASE("range formula examples") {
  RangeResult a = range(StabilityTheorem::Constant, 1, 20, 4);
  CHECK(a.surjective_bound == 5);
  CHECK(a.surjective_up_to == 5);
  CHECK(a.isomorphism_bound == mpq_class(14, 3));
  CHECK(a.isomorphism_up_to == 4);
  CHECK(a.case_label == "(i)");

  RangeResult small = range(StabilityTheorem::Constant, 1, 7, 4);
  CHECK(small.surjective_bound == mpq_class(2, 3));
  CHECK(small.surjective_up_to == 0);

  RangeResult seven = range(StabilityTheorem::Constant, 7, 20, 2);
  CHECK(seven.surjective_bound == mpq_class(13, 5));
  CHECK(seven.surjective_up_to == 2);

  RangeResult ab1 = range(StabilityTheorem::Abelian, 1, 20, 4);
  CHECK(ab1.surjective_bound == mpq_class(14, 3));
  CHECK(ab1.surjective_up_to == 4);
  RangeResult ab3 = range(StabilityTheorem::Abelian, 3, 20, 2);
  CHECK(ab3.surjective_bound == 5);
  RangeResult degenerate = range(StabilityTheorem::Abelian, 1, 3, 4);
  CHECK(degenerate.surjective_up_to < 0);

  RangeResult poly = range(StabilityTheorem::Polynomial, 1, 26, 4, 1);
  CHECK(poly.surjective_bound == 6);
  CHECK(poly.surjective_up_to == 6);
  RangeResult poly3 = range(StabilityTheorem::Polynomial, 3, 8, 2, 1);
  CHECK(poly3.surjective_bound == mpq_class(-4, 5));
  CHECK(poly3.surjective_up_to == -1);

  CHECK(intro_corollary_range(3, 'a', 20, ArithmeticInputs{}).up_to == 6);
  CorollaryRange c1 = intro_corollary_range(1, 'a', 30, uniform(4, false), 1);
  CHECK(c1.bound == mpq_class(19, 3));
  CHECK(c1.up_to == 6);
  for (long m : {2L, 3L, 4L}) CHECK(intro_corollary_range(2, 'b', m + 6, uniform(m, false)).up_to == 0);

  CHECK(floor_of(mpq_class(-1, 3)) == -1);
  CHECK(floor_of(mpq_class(7, 1)) == 7);
  CHECK(case_count(StabilityTheorem::Abelian) == 6);
  CHECK(case_count(StabilityTheorem::Constant) == 8);
}

TEST_CASE("range inputs are validated") {
  RangeInputs in;
  in.n = 20;
  in.case_index = 5;
  in.arithmetic = uniform(3, true);
  CHECK_THROWS_AS(range_constant(in), DomainError);
  in.arithmetic = ArithmeticInputs{};
  in.case_index = 1;
  CHECK_THROWS_AS(range_constant(in), DomainError);
  in.arithmetic = uniform(3, true);
  in.case_index = 9;
  CHECK_THROWS_AS(range_constant(in), DomainError);
  in.case_index = 7;
  CHECK_THROWS_AS(range_abelian(in), DomainError);
  in.case_index = 1;
  in.degree = -2;
  CHECK_THROWS_AS(range_polynomial(in), DomainError);
}

TEST_CASE("coefficient degrees") {
  CHECK(direct_sum({2, 5}, {1, 5}).degree == 2);
  CHECK(direct_sum({-1, 5}, {-1, 5}).degree == -1);
  CHECK_THROWS_AS(direct_sum({2, 5}, {1, 4}), DomainError);

  DegreeClaim zero{-1, 3, 0, nullptr, nullptr};
  CHECK(validate_degree_claim(zero).accepted);
  DegreeClaim unjustified{-1, 3, std::nullopt, nullptr, nullptr};
  CHECK_FALSE(validate_degree_claim(unjustified).accepted);

  auto kernel = std::make_shared<DegreeClaim>(DegreeClaim{-1, 4, 0, nullptr, nullptr});
  auto cokernel = std::make_shared<DegreeClaim>(DegreeClaim{-1, 3, 0, nullptr, nullptr});
  DegreeClaim degree0{0, 4, std::nullopt, kernel, cokernel};
  CHECK(validate_degree_claim(degree0).accepted);
  DegreeClaim wrong_level{0, 4, std::nullopt, kernel, kernel};
  CHECK_FALSE(validate_degree_claim(wrong_level).accepted);
  auto bad_kernel = std::make_shared<DegreeClaim>(DegreeClaim{0, 4, std::nullopt, kernel, cokernel});
  DegreeClaim bad{1, 4, std::nullopt, bad_kernel, cokernel};
  CHECK_FALSE(validate_degree_claim(bad).accepted);
}

TEST_CASE("property: ranges are monotone in n, the invariant and the degree") {
  // Raw negative bounds may grow with the invariant; the integer ranges they describe do not.
  for (StabilityTheorem t : {StabilityTheorem::Constant, StabilityTheorem::Abelian, StabilityTheorem::Polynomial})
    for (unsigned c = 1; c <= case_count(t); ++c)
      for (long v = 1; v <= 5; ++v)
        for (long n = 0; n <= 40; ++n) {
          RangeResult here = range(t, c, n, v, 1);
          CHECK(here.isomorphism_up_to <= here.surjective_up_to);
          CHECK(range(t, c, n + 1, v, 1).surjective_bound >= here.surjective_bound);
          CHECK(clamp(range(t, c, n, v + 1, 1).surjective_up_to) <= clamp(here.surjective_up_to));
          CHECK(clamp(range(t, c, n, v + 1, 1).isomorphism_up_to) <= clamp(here.isomorphism_up_to));
          if (t == StabilityTheorem::Polynomial) CHECK(range(t, c, n, v, 2).surjective_bound < here.surjective_bound);
        }
}

TEST_CASE("property: formally real cases give at least the general range") {
  // Constant coefficients: (ii) against (i) and (iv) against (iii), likewise (vi)/(v) and (viii)/(vii).
  auto contains = [](StabilityTheorem t, unsigned real, unsigned general, long n, long v) {
    RangeResult a = range(t, real, n, v), b = range(t, general, n, v);
    CHECK(clamp(a.surjective_up_to) >= clamp(b.surjective_up_to));
    CHECK(clamp(a.isomorphism_up_to) >= clamp(b.isomorphism_up_to));
  };
  for (long v = 1; v <= 6; ++v)
    for (long n = 0; n <= 60; ++n) {
      contains(StabilityTheorem::Constant, 2, 1, n, v);
      contains(StabilityTheorem::Constant, 4, 3, n, v);
      contains(StabilityTheorem::Constant, 6, 5, n, v);
      contains(StabilityTheorem::Constant, 8, 7, n, v);
      contains(StabilityTheorem::Polynomial, 2, 1, n, v);
      contains(StabilityTheorem::Polynomial, 4, 3, n, v);
    }
}

TEST_CASE("property: constant and polynomial ranges coincide in degree zero on surjectivity") {
  for (unsigned c = 1; c <= 8; ++c)
    for (long n = 5; n <= 30; ++n) {
      RangeResult constant = range(StabilityTheorem::Constant, c, n, 2);
      RangeResult poly = range(StabilityTheorem::Polynomial, c, n, 2, 0);
      CHECK(poly.surjective_bound == constant.surjective_bound);
      CHECK(poly.isomorphism_bound <= constant.isomorphism_bound);
    }
}

TEST_CASE("range grid matches the golden table") {
  std::ifstream in(STIEFEL_GOLDEN_DIR "/ranges.tsv");
  REQUIRE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(range_grid_tsv() == golden.str());
}
