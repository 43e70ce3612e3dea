#include <doctest.h>

#include "oracles.hpp"
#include "stiefel/quadmod.hpp"

using namespace stiefel;

namespace {

Scalar rat(const RingDescriptor& r, long a, long b = 1) {
  mpq_class v(a, b);
  v.canonicalize();
  return Scalar::from_rational(r, v);
}

bool is_diagonalization(const QuadraticModule& q, const Diagonalization& d) {
  Matrix lhs = d.basis.transpose() * q.gram() * d.basis;
  for (const auto& e : d.entries)
    if (!e.is_unit()) return false;
  return lhs == Matrix::diagonal(d.entries);
}

/// All forms <a_1..a_k> over F_p with unit entries, k = rank.
std::vector<std::vector<long>> unit_diagonals(long p, std::size_t rank) {
  std::vector<std::vector<long>> out;
  std::vector<long> d(rank, 1);
  while (true) {
    out.push_back(d);
    std::size_t i = rank;
    while (i > 0 && ++d[i - 1] == p) d[--i] = 1;
    if (i == 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("evaluate and polar") {
  auto Q = RingDescriptor::rationals();
  auto e2 = QuadraticModule::euclidean(Q, 2);
  CHECK(evaluate(e2, make_vector(Q, {3, 4})) == Scalar(Q, 25L));
  QuadraticModule h(Matrix::from_rows(Q, {{0, 1}, {1, 0}}));
  CHECK(evaluate(h, make_vector(Q, {1, 1})) == Scalar(Q, 2L));
  CHECK(polar(e2, basis_vector(Q, 2, 0), basis_vector(Q, 2, 1)).is_zero());
  // B(x, x) = 2 q(x) under this Gram convention.
  CHECK(polar(e2, make_vector(Q, {3, 4}), make_vector(Q, {3, 4})) == Scalar(Q, 50L));
}

TEST_CASE("orthogonal sums") {
  auto Q = RingDescriptor::rationals();
  auto s = orthogonal_sum(QuadraticModule::diagonal(Q, {1}), QuadraticModule::diagonal(Q, {-1}));
  CHECK(s.gram() == Matrix::from_rows(Q, {{1, 0}, {0, -1}}));
  CHECK(orthogonal_sum(QuadraticModule::euclidean(Q, 2), QuadraticModule::euclidean(Q, 3)).gram() ==
        QuadraticModule::euclidean(Q, 5).gram());
  // n<1,-1> is isometric to the hyperbolic module.
  for (std::size_t n = 1; n <= 3; ++n) {
    HyperbolicModule hm = hyperbolic_module(Q, n);
    QuadraticModule target = QuadraticModule::diagonal(Q, {1, -1});
    QuadraticModule sum = target;
    for (std::size_t i = 1; i < n; ++i) sum = orthogonal_sum(sum, target);
    CHECK(hm.witness.transpose() * hm.module.gram() * hm.witness == sum.gram());
  }
}

TEST_CASE("diagonalize examples") {
  auto Q = RingDescriptor::rationals();
  QuadraticModule h(Matrix::from_rows(Q, {{0, 1}, {1, 0}}));
  Diagonalization d = diagonalize(h);
  CHECK(is_diagonalization(h, d));
  // Oracle: the determinant class is preserved; diag entries multiply to -1 up to squares.
  mpq_class prod = d.entries[0].to_rational() * d.entries[1].to_rational();
  CHECK(prod < 0);

  auto e3 = QuadraticModule::euclidean(Q, 3);
  Diagonalization id = diagonalize(e3);
  CHECK(id.basis == Matrix::identity(Q, 3));

  auto Z5 = RingDescriptor::localized(5);
  QuadraticModule seventh = QuadraticModule::diagonal({rat(Z5, 1, 7)});
  Diagonalization ds = diagonalize(seventh);
  REQUIRE(ds.entries.size() == 1);
  CHECK(ds.entries[0] == rat(Z5, 1, 7));
}

TEST_CASE("orthogonal complements") {
  auto Q = RingDescriptor::rationals();
  auto e3 = QuadraticModule::euclidean(Q, 3);
  Submodule c = orthogonal_complement(e3, {basis_vector(Q, 3, 0)});
  CHECK(c.rank() == 2);
  for (const auto& w : c.basis) CHECK(w[0].is_zero());

  auto F5 = RingDescriptor::finite_field(5);
  Submodule c5 = orthogonal_complement(QuadraticModule::euclidean(F5, 2), {make_vector(F5, {1, 1})});
  REQUIRE(c5.rank() == 1);
  CHECK(normalize_direction(c5.basis[0]) == make_vector(F5, {1, -1}));

  auto Z5 = RingDescriptor::localized(5);
  Submodule cz = orthogonal_complement(QuadraticModule::euclidean(Z5, 2), {make_vector(Z5, {1, 2})});
  REQUIRE(cz.rank() == 1);
  CHECK(normalize_direction(cz.basis[0]) == make_vector(Z5, {2, -1}));
  CHECK(is_primitive(cz.basis[0]));
}

TEST_CASE("radical splitting") {
  auto Z5 = RingDescriptor::localized(5);
  RadicalSplit s = split_radical(QuadraticModule::diagonal(Z5, {5, 1}));
  REQUIRE(s.radical.rank() == 1);
  REQUIRE(s.core.rank() == 1);
  CHECK(normalize_direction(s.radical.basis[0]) == make_vector(Z5, {1, 0}));
  CHECK(normalize_direction(s.core.basis[0]) == make_vector(Z5, {0, 1}));

  RadicalSplit ns = split_radical(QuadraticModule::euclidean(Z5, 3));
  CHECK(ns.radical.rank() == 0);
  CHECK(ns.core.rank() == 3);

  RadicalSplit mixed = split_radical(QuadraticModule::diagonal({rat(Z5, 5), rat(Z5, 1, 7)}));
  CHECK(mixed.radical.rank() == 1);
  CHECK(mixed.core.rank() == 1);
}

TEST_CASE("complement cores") {
  auto Z5 = RingDescriptor::localized(5);
  auto e4 = QuadraticModule::euclidean(Z5, 4);
  Submodule w0 = complement_core(e4, Frame(), Frame());
  CHECK(w0.rank() == 4);
  Submodule w1 = complement_core(e4, Frame(e4, {basis_vector(Z5, 4, 0)}), Frame());
  CHECK(w1.rank() == 3);
  CHECK(restrict_to(e4, w1.basis).is_nonsingular());

  // Seed-fixed random unit vectors in E^6 over Z_(5): products of reflections applied to e_1, e_2.
  oracle::Rng rng(17);
  auto e6 = QuadraticModule::euclidean(Z5, 6);
  for (int trial = 0; trial < 10; ++trial) {
    Vector u = basis_vector(Z5, 6, 0), v = basis_vector(Z5, 6, 1);
    for (int k = 0; k < 3; ++k) {
      Vector r(6, Scalar::zero(Z5));
      for (auto& c : r) c = Scalar(Z5, oracle::uniform(rng, -2, 2));
      Scalar len = evaluate(e6, r);
      if (!len.is_unit()) continue;
      auto reflect = [&](const Vector& x) { return x - (gram_product(e6, x, r) * len.inverse() * Scalar(Z5, 2L)) * r; };
      u = reflect(u);
      v = reflect(v);
    }
    Frame fu(e6, {u}), fv(e6, {v});
    Submodule w = complement_core(e6, fu, fv);
    CHECK(w.rank() >= 3);
    CHECK(restrict_to(e6, w.basis).is_nonsingular());
    for (const auto& b : w.basis) {
      CHECK(gram_product(e6, b, u).is_zero());
      CHECK(gram_product(e6, b, v).is_zero());
    }
  }
}

TEST_CASE("hyperbolic modules") {
  auto Q = RingDescriptor::rationals();
  HyperbolicModule h1 = hyperbolic_module(Q, 1);
  Diagonalization d = diagonalize(h1.module);
  CHECK(is_diagonalization(h1.module, d));
  // Discriminant oracle: det is -1/4, i.e. -1 up to squares.
  mpq_class det = h1.module.determinant().to_rational();
  CHECK(det == mpq_class(-1, 4));
  CHECK(hyperbolic_module(Q, 0).module.rank() == 0);
  auto F5 = RingDescriptor::finite_field(5);
  QuadraticModule two_hyp = orthogonal_sum(QuadraticModule::diagonal(F5, {1, -1}), QuadraticModule::diagonal(F5, {1, -1}));
  CHECK(is_isometric_ff(hyperbolic_module(F5, 2).module, two_hyp));
}

TEST_CASE("reduction mod p") {
  auto Z5 = RingDescriptor::localized(5);
  auto F5 = RingDescriptor::finite_field(5);
  CHECK(reduce_mod_p(QuadraticModule::euclidean(Z5, 3)).gram() == QuadraticModule::euclidean(F5, 3).gram());
  QuadraticModule r = reduce_mod_p(QuadraticModule::diagonal({rat(Z5, 1, 7)}));
  CHECK(r.gram().at(0, 0) == Scalar(F5, oracle::inverse_mod(7, 5)));
  QuadraticModule z = reduce_mod_p(QuadraticModule::diagonal(Z5, {5}));
  CHECK(z.gram().at(0, 0).is_zero());
  CHECK_FALSE(z.is_nonsingular());
}

TEST_CASE("finite-field isometry test") {
  auto F5 = RingDescriptor::finite_field(5);
  CHECK(is_isometric_ff(QuadraticModule::diagonal(F5, {1, 1}), QuadraticModule::diagonal(F5, {2, 2})));
  CHECK_FALSE(is_isometric_ff(QuadraticModule::diagonal(F5, {1}), QuadraticModule::diagonal(F5, {2})));
  auto q = QuadraticModule::diagonal(F5, {1, 2, 3});
  CHECK(is_isometric_ff(q, q));
}

TEST_CASE("property: diagonalize yields P^T G P = diag with unit entries") {
  oracle::Rng rng(23);
  for (auto ring : {RingDescriptor::rationals(), RingDescriptor::localized(5), RingDescriptor::finite_field(7),
                    RingDescriptor::padic(5, 3)}) {
    int made = 0;
    for (int trial = 0; trial < 200 && made < 40; ++trial) {
      std::size_t n = static_cast<std::size_t>(oracle::uniform(rng, 1, 4));
      Matrix g(ring, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) g.at(i, j) = g.at(j, i) = Scalar(ring, oracle::uniform(rng, -4, 4));
      QuadraticModule q(g);
      if (!q.is_nonsingular()) continue;
      ++made;
      CHECK(is_diagonalization(q, diagonalize(q)));
    }
    CHECK(made > 10);
  }
}

TEST_CASE("property: orthogonal complements are orthogonal with complementary rank") {
  oracle::Rng rng(29);
  for (auto ring : {RingDescriptor::rationals(), RingDescriptor::finite_field(5), RingDescriptor::localized(3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t n = static_cast<std::size_t>(oracle::uniform(rng, 2, 5));
      auto e = QuadraticModule::euclidean(ring, n);
      std::size_t k = static_cast<std::size_t>(oracle::uniform(rng, 1, static_cast<long>(n) - 1));
      std::vector<Vector> u;
      for (std::size_t i = 0; i < k; ++i) {
        Vector v(n, Scalar::zero(ring));
        for (auto& c : v) c = Scalar(ring, oracle::uniform(rng, -3, 3));
        u.push_back(v);
      }
      QuadraticModule ru = restrict_to(e, u);
      if (!ru.is_nonsingular()) continue;
      Submodule c = orthogonal_complement(e, u);
      CHECK(c.rank() + k == n);
      for (const auto& a : u)
        for (const auto& b : c.basis) CHECK(polar(e, a, b).is_zero());
    }
  }
}

TEST_CASE("property: reduction commutes with orthogonal sums") {
  oracle::Rng rng(31);
  auto Z5 = RingDescriptor::localized(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Scalar> a, b;
    for (int i = 0; i < 2; ++i) a.push_back(rat(Z5, oracle::uniform(rng, -20, 20), 1 + 5 * oracle::uniform(rng, 0, 3) + 1));
    for (int i = 0; i < 3; ++i) b.push_back(rat(Z5, oracle::uniform(rng, -20, 20), 3));
    auto qa = QuadraticModule::diagonal(a), qb = QuadraticModule::diagonal(b);
    CHECK(reduce_mod_p(orthogonal_sum(qa, qb)).gram() == orthogonal_sum(reduce_mod_p(qa), reduce_mod_p(qb)).gram());
  }
}

TEST_CASE("property: Witt cancellation over F_p for diagonal forms up to rank 4") {
  for (long p : {3L, 5L}) {
    auto F = RingDescriptor::finite_field(static_cast<std::uint64_t>(p));
    for (std::size_t rank = 1; rank <= 3; ++rank) {
      auto forms = unit_diagonals(p, rank);
      for (const auto& w : unit_diagonals(p, 4 - rank)) {
        auto qw = QuadraticModule::diagonal(F, w);
        for (const auto& a : forms)
          for (const auto& b : forms) {
            auto qa = QuadraticModule::diagonal(F, a), qb = QuadraticModule::diagonal(F, b);
            if (is_isometric_ff(orthogonal_sum(qa, qw), orthogonal_sum(qb, qw))) CHECK(is_isometric_ff(qa, qb));
          }
      }
    }
  }
}

TEST_CASE("frames reject non-orthonormal input") {
  auto F5 = RingDescriptor::finite_field(5);
  auto e3 = QuadraticModule::euclidean(F5, 3);
  CHECK_NOTHROW(Frame(e3, {basis_vector(F5, 3, 0), basis_vector(F5, 3, 1)}));
  CHECK_THROWS_AS(Frame(e3, {basis_vector(F5, 3, 0), basis_vector(F5, 3, 0)}), DomainError);
  CHECK_THROWS_AS(Frame(e3, {make_vector(F5, {1, 1, 0})}), DomainError);
}
