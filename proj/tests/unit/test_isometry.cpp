#include <doctest.h>

#include "oracles.hpp"
#include "stiefel/experiments.hpp"
#include "stiefel/isometry.hpp"

using namespace stiefel;

namespace {

/// tau_v(x) = x - (B(x, v) / q(v)) v evaluated directly on rationals.
std::vector<mpq_class> reflect_rational(const std::vector<mpq_class>& x, const std::vector<mpq_class>& v) {
  mpq_class b = 0, qv = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    b += 2 * x[i] * v[i];
    qv += v[i] * v[i];
  }
  std::vector<mpq_class> out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] -= b / qv * v[i];
  return out;
}

}  // namespace

TEST_CASE("reflections") {
  auto Q = RingDescriptor::rationals();
  auto e2 = QuadraticModule::euclidean(Q, 2);
  Isometry t = reflection(e2, basis_vector(Q, 2, 0));
  CHECK(t.matrix() == Matrix::from_rows(Q, {{-1, 0}, {0, 1}}));

  Isometry s = reflection(e2, make_vector(Q, {1, 1}));
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<mpq_class> x{i == 0 ? 1 : 0, i == 1 ? 1 : 0};
    auto expected = reflect_rational(x, {1, 1});
    Vector got = s.apply(basis_vector(Q, 2, i));
    CHECK(got[0].to_rational() == expected[0]);
    CHECK(got[1].to_rational() == expected[1]);
  }
  CHECK(s.apply(basis_vector(Q, 2, 0)) == make_vector(Q, {0, -1}));

  auto F5 = RingDescriptor::finite_field(5);
  auto f2 = QuadraticModule::euclidean(F5, 2);
  // q(1, 2) = 5 = 0 in F_5: no reflection exists.
  CHECK_THROWS_AS(reflection(f2, make_vector(F5, {1, 2})), DomainError);
  Isometry u = reflection(f2, make_vector(F5, {1, 1}));
  CHECK((u * u).is_identity());
}

TEST_CASE("Cartan-Dieudonne factorizations") {
  auto F3 = RingDescriptor::finite_field(3);
  auto e2 = QuadraticModule::euclidean(F3, 2);
  CHECK(cartan_dieudonne(Isometry::identity(e2)).empty());

  Vector v = make_vector(F3, {1, 0});
  auto one = cartan_dieudonne(reflection(e2, v));
  REQUIRE(one.size() == 1);
  CHECK(normalize_direction(one[0]) == normalize_direction(v));

  // Rotation by a quarter turn, of order 4.
  Isometry rot(e2, Matrix::from_rows(F3, {{0, -1}, {1, 0}}));
  auto two = cartan_dieudonne(rot);
  CHECK(two.size() == 2);
  CHECK(compose_reflections(e2, two) == rot);
}

TEST_CASE("orthogonal group orders match exhaustive matrix search") {
  struct Case {
    long p;
    std::vector<long> diag;
  };
  for (const Case& c : {Case{3, {1}}, Case{5, {1}}, Case{3, {1, 1}}, Case{5, {1, 1}}, Case{5, {1, 2}},
                        Case{3, {1, 1, 1}}, Case{3, {1, 1, 2}}}) {
    auto F = RingDescriptor::finite_field(static_cast<std::uint64_t>(c.p));
    std::size_t n = c.diag.size();
    std::vector<long> gram(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) gram[i * n + i] = c.diag[i];
    FiniteOrthogonalGroup g = enumerate_group(QuadraticModule::diagonal(F, c.diag));
    CHECK(g.order() == oracle::orthogonal_group_order(c.p, gram, n));
  }
  auto F3 = RingDescriptor::finite_field(3);
  FiniteOrthogonalGroup o3 = enumerate_group(QuadraticModule::euclidean(F3, 3));
  CHECK(o3.order() == 48);
  Abelianization ab = abelianization(o3);
  CHECK(ab.exponent <= 2);
  CHECK(2 % ab.exponent == 0);
  CHECK(ab.group_order == 48);
  CHECK(ab.group_order % ab.commutator_order == 0);
  CHECK_THROWS_AS(enumerate_group(QuadraticModule::euclidean(F3, 3), 10), BudgetError);
}

TEST_CASE("frame transport") {
  auto F5 = RingDescriptor::finite_field(5);
  auto e3 = QuadraticModule::euclidean(F5, 3);
  Frame f1(e3, {basis_vector(F5, 3, 0)}), f2(e3, {basis_vector(F5, 3, 1)});
  Isometry t = frame_transport(e3, f1, f2);
  CHECK(t.apply(basis_vector(F5, 3, 0)) == basis_vector(F5, 3, 1));
  // A permutation-like map: every column is a signed basis vector.
  for (std::size_t j = 0; j < 3; ++j) {
    int nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i) nonzero += !t.matrix().at(i, j).is_zero();
    CHECK(nonzero == 1);
  }
  CHECK(frame_transport(e3, f1, f1).is_identity());

  auto F3 = RingDescriptor::finite_field(3);
  auto e2 = QuadraticModule::euclidean(F3, 2);
  auto units = oracle::euclidean_vectors_with_value(3, 2, 1);
  CHECK(units.size() == 4);
  for (const auto& a : units)
    for (const auto& b : units) {
      Vector va = make_vector(F3, a), vb = make_vector(F3, b);
      Isometry m = frame_transport(e2, Frame(e2, {va}), Frame(e2, {vb}));
      CHECK(m.apply(va) == vb);
    }
}

TEST_CASE("stabilizer restriction") {
  auto F3 = RingDescriptor::finite_field(3);
  auto e2 = QuadraticModule::euclidean(F3, 2);
  auto e1 = QuadraticModule::euclidean(F3, 1);
  Isometry psi(e2, Matrix::from_rows(F3, {{0, -1}, {1, 0}}));
  Isometry phi = direct_sum_identity(psi, e1);
  CHECK(stabilizer_restrict(phi, 2) == psi);
  CHECK(stabilizer_restrict(Isometry::identity(QuadraticModule::euclidean(F3, 3)), 2).is_identity());
  Isometry moves(QuadraticModule::euclidean(F3, 3), Matrix::from_rows(F3, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
  CHECK_THROWS_AS(stabilizer_restrict(moves, 2), DomainError);

  StabilizerReport r = stabilizer_check(3, 3);
  CHECK(r.result.pass);
  CHECK(r.group_order == 48);
  // The stabilizer of e_3 is O_2(F_3) x {1}.
  CHECK(r.stabilizer_order == oracle::orthogonal_group_order(3, {1, 0, 0, 1}, 2));
}

TEST_CASE("property: reflections generate and Cartan-Dieudonne round-trips") {
  for (std::size_t n = 1; n <= 3; ++n) {
    FactorizationReport r = factor_orthogonal_group(3, n);
    CHECK(r.result.pass);
    CHECK(r.longest <= 2 * n);
  }
  FactorizationReport f5 = factor_orthogonal_group(5, 2);
  CHECK(f5.result.pass);
  FactorizationReport z5 = factor_random_isometries(5, 3, 25, 0);
  CHECK(z5.result.pass);
  CHECK(z5.isometries == 25);
  CHECK(z5.longest <= 6);
}

TEST_CASE("property: frame transport exists for every pair of short frames") {
  for (std::uint32_t p : {3U, 5U})
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= std::min<std::size_t>(2, n); ++k) {
        HomogeneityReport h = homogeneity_check(p, n, k);
        CHECK(h.result.pass);
        CHECK(h.pairs == h.frames * h.frames);
      }
}

TEST_CASE("property: word-sized and exact transports agree") {
  auto F5 = RingDescriptor::finite_field(5);
  auto e3 = QuadraticModule::euclidean(F5, 3);
  fp::Form form = fp::Form::from_module(e3);
  auto units = oracle::euclidean_vectors_with_value(5, 3, 1);
  oracle::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto& a = units[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(units.size()) - 1))];
    const auto& b = units[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<long>(units.size()) - 1))];
    Isometry exact = frame_transport(e3, Frame(e3, {make_vector(F5, a)}), Frame(e3, {make_vector(F5, b)}));
    std::vector<std::uint32_t> ua(a.begin(), a.end()), ub(b.begin(), b.end());
    fp::Mat word = fp::frame_transport(form, {ua}, {ub});
    CHECK(fp::to_matrix(form.field(), word, 3) == exact.matrix());
  }
}
