#include <doctest.h>

#include "oracles.hpp"
#include "stiefel/rings.hpp"

using namespace stiefel;

namespace {
mpq_class q(long a, long b = 1) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}
}  // namespace

TEST_CASE("valuation examples") {
  auto Q = RingDescriptor::rationals();
  CHECK(valuation(Scalar::from_rational(Q, q(5, 3)), 5).value() == 1);
  CHECK(valuation(Scalar::zero(Q), 5).is_infinite());
  // Oracle: count factors of 5 in numerator and denominator separately.
  mpq_class x = q(9, 25);
  long expected = oracle::factor_count(x.get_num(), 5) - oracle::factor_count(x.get_den(), 5);
  CHECK(expected == -2);
  CHECK(valuation(Scalar::from_rational(Q, x), 5).value() == expected);
}

TEST_CASE("residue examples") {
  auto Z5 = RingDescriptor::localized(5);
  auto F5 = RingDescriptor::finite_field(5);
  Scalar r = residue(Scalar::from_rational(Z5, q(1, 7)));
  CHECK(r.ring() == F5);
  CHECK(static_cast<long>(r.residue_value()) == oracle::inverse_mod(7, 5));
  CHECK(residue(Scalar::from_rational(Z5, q(5, 3))).is_zero());
  CHECK(residue(Scalar(RingDescriptor::padic(5, 2), 16L)).residue_value() == 1);
  CHECK_THROWS_AS(Scalar::from_rational(Z5, q(1, 5)), DomainError);
}

TEST_CASE("square roots in F_p") {
  auto F5 = RingDescriptor::finite_field(5);
  auto r = is_square(Scalar(F5, 4L));
  REQUIRE(r);
  CHECK((*r * *r) == Scalar(F5, 4L));
  // Squares mod 5 are {0, 1, 4}.
  CHECK_FALSE(is_square(Scalar(F5, 2L)));
  auto z = is_square(Scalar::zero(RingDescriptor::finite_field(3)));
  REQUIRE(z);
  CHECK(z->is_zero());
  for (long p : {3L, 5L, 7L, 11L}) {
    auto F = RingDescriptor::finite_field(static_cast<std::uint64_t>(p));
    for (long a = 0; a < p; ++a) {
      bool oracle_square = !oracle::roots_mod({-a, 0, 1}, p).empty();
      CHECK(is_square(Scalar(F, a)).has_value() == oracle_square);
    }
  }
}

TEST_CASE("sums of squares") {
  auto F3 = RingDescriptor::finite_field(3);
  auto two = sum_of_squares(Scalar(F3, 2L), 2);
  REQUIRE(two);
  CHECK((*two)[0] == Scalar(F3, 1L));
  CHECK((*two)[1] == Scalar(F3, 1L));
  auto F5 = RingDescriptor::finite_field(5);
  auto minus_one = sum_of_squares(Scalar(F5, -1L), 1);
  REQUIRE(minus_one);
  CHECK((*minus_one)[0] == Scalar(F5, 2L));
  // 7 = 7 mod 8 is never a sum of three integer squares.
  CHECK_FALSE(sum_of_squares(Scalar(RingDescriptor::integers(), 7L), 3, 3));
  auto seven = sum_of_squares(Scalar(RingDescriptor::integers(), 7L), 4, 3);
  REQUIRE(seven);
  Scalar total = Scalar::zero(RingDescriptor::integers());
  for (const auto& s : *seven) total += s * s;
  CHECK(total == Scalar(RingDescriptor::integers(), 7L));
}

TEST_CASE("hensel_root examples") {
  auto Z25 = RingDescriptor::padic(5, 2);
  std::vector<Scalar> f{Scalar(Z25, -6L), Scalar(Z25, 0L), Scalar(Z25, 1L)};
  Scalar r = hensel_root(f, Scalar(Z25, 1L));
  auto roots = oracle::roots_mod({-6, 0, 1}, 25);
  CHECK(r.residue_value() == 16);
  CHECK(std::find(roots.begin(), roots.end(), 16) != roots.end());

  auto Z625 = RingDescriptor::padic(5, 4);
  std::vector<Scalar> g{Scalar(Z625, -1L), Scalar(Z625, 0L), Scalar(Z625, 1L)};
  CHECK(hensel_root(g, Scalar(Z625, 1L)).residue_value() == 1);

  std::vector<Scalar> h{Scalar(Z25, 1L), Scalar(Z25, 0L), Scalar(Z25, 1L)};
  CHECK(hensel_root(h, Scalar(Z25, 2L)).residue_value() == 7);

  std::vector<Scalar> bad{Scalar(Z25, 0L), Scalar(Z25, 0L), Scalar(Z25, 1L)};
  CHECK_THROWS_AS(hensel_root(bad, Scalar(Z25, 0L)), DomainError);
}

TEST_CASE("property: field axioms hold exhaustively on small prime fields") {
  for (long p : {3L, 5L, 7L}) {
    auto F = RingDescriptor::finite_field(static_cast<std::uint64_t>(p));
    for (long a = 0; a < p; ++a) {
      Scalar x(F, a);
      CHECK((x + Scalar::zero(F)) == x);
      CHECK((x * Scalar::one(F)) == x);
      CHECK((x + (-x)).is_zero());
      if (a != 0) CHECK((x * x.inverse()).is_one());
      for (long b = 0; b < p; ++b) {
        Scalar y(F, b);
        CHECK((x + y) == (y + x));
        CHECK((x * y) == (y * x));
        for (long c = 0; c < p; ++c) {
          Scalar z(F, c);
          CHECK(((x + y) + z) == (x + (y + z)));
          CHECK(((x * y) * z) == (x * (y * z)));
          CHECK((x * (y + z)) == (x * y + x * z));
        }
      }
    }
  }
}

TEST_CASE("property: valuation is ultrametric and residue is multiplicative") {
  oracle::Rng rng(11);
  auto Q = RingDescriptor::rationals();
  auto Z5 = RingDescriptor::localized(5);
  for (int trial = 0; trial < 500; ++trial) {
    mpq_class a = q(oracle::uniform(rng, -200, 200), oracle::uniform(rng, 1, 200));
    mpq_class b = q(oracle::uniform(rng, -200, 200), oracle::uniform(rng, 1, 200));
    Scalar x = Scalar::from_rational(Q, a), y = Scalar::from_rational(Q, b);
    Valuation vx = valuation(x, 5), vy = valuation(y, 5), vs = valuation(x + y, 5);
    CHECK(vs >= std::min(vx, vy));
    if (!x.is_zero() && !y.is_zero())
      CHECK(valuation(x * y, 5).value() == vx.value() + vy.value());

    // Denominators prime to 5 keep the values inside Z_(5).
    long da = oracle::uniform(rng, 1, 60), db = oracle::uniform(rng, 1, 60);
    if (da % 5 == 0) ++da;
    if (db % 5 == 0) ++db;
    Scalar u = Scalar::from_rational(Z5, q(oracle::uniform(rng, -99, 99), da));
    Scalar w = Scalar::from_rational(Z5, q(oracle::uniform(rng, -99, 99), db));
    CHECK(residue(u * w) == residue(u) * residue(w));
    CHECK(residue(u + w) == residue(u) + residue(w));
  }
}

TEST_CASE("property: hensel_root agrees with exhaustive root search") {
  oracle::Rng rng(5);
  for (long p : {3L, 5L, 7L}) {
    for (unsigned n = 1; n <= 3; ++n) {
      auto R = RingDescriptor::padic(static_cast<std::uint64_t>(p), n);
      long modulus = 1;
      for (unsigned i = 0; i < n; ++i) modulus *= p;
      for (int trial = 0; trial < 30; ++trial) {
        std::vector<long> c{oracle::uniform(rng, -40, 40), oracle::uniform(rng, -40, 40), oracle::uniform(rng, 1, 9)};
        for (long r0 : oracle::roots_mod(c, p)) {
          long deriv = oracle::mod(c[1] + 2 * c[2] * r0, p);
          if (deriv == 0) continue;
          std::vector<Scalar> coeffs;
          for (long v : c) coeffs.emplace_back(R, v);
          Scalar r = hensel_root(coeffs, Scalar(R, r0));
          auto roots = oracle::roots_mod(c, modulus);
          long lifted = static_cast<long>(r.residue_value());
          CHECK(std::find(roots.begin(), roots.end(), lifted) != roots.end());
          CHECK(lifted % p == r0);
        }
      }
    }
  }
}

TEST_CASE("ring descriptors round-trip through their names") {
  for (auto r : {RingDescriptor::finite_field(5), RingDescriptor::rationals(), RingDescriptor::localized(7),
                 RingDescriptor::padic(5, 3), RingDescriptor::integers()})
    CHECK(RingDescriptor::parse(r.name()) == r);
  CHECK(RingDescriptor::parse("Zp:5:3") == RingDescriptor::padic(5, 3));
  CHECK_THROWS_AS(RingDescriptor::finite_field(9), DomainError);
  CHECK_THROWS_AS(RingDescriptor::finite_field(2), DomainError);
  CHECK(RingDescriptor::padic(5, 3).henselian());
  CHECK_FALSE(RingDescriptor::localized(5).henselian());
  CHECK(RingDescriptor::localized(5).formally_real());
}
