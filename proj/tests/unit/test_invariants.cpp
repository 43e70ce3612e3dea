#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "stiefel/invariants.hpp"
#include "stiefel/repsolve.hpp"

using namespace stiefel;

namespace {

/// Row-reduced echelon form of the span of `rows` mod p, used as a subspace key.
std::vector<std::vector<long>> rref(std::vector<std::vector<long>> rows, long p) {
  std::size_t r = 0;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    long inv = oracle::inverse_mod(oracle::mod(rows[r][c], p), p);
    for (auto& v : rows[r]) v = oracle::mod(v * inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      long f = rows[i][c];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = oracle::mod(rows[i][j] - f * rows[r][j], p);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

}  // namespace

TEST_CASE("finite-field invariants") {
  for (std::uint64_t p : {3, 5, 7, 11, 13}) {
    InvariantReport r = compute_invariants(RingDescriptor::finite_field(p));
    CHECK(r.pythagoras.value == 2);
    CHECK(r.u_invariant.value == 2);
    CHECK(r.m_invariant.value == 2);
    // -1 is a square mod p exactly when some x has x^2 = p - 1.
    bool minus_one_square = !oracle::roots_mod({1, 0, 1}, static_cast<long>(p)).empty();
    CHECK(r.stufe.value == (minus_one_square ? 1U : 2U));
    CHECK(r.pythagoras.is_exact());
    CHECK(r.stufe.is_exact());
    CHECK(r.u_invariant.is_exact());
    CHECK(r.m_invariant.is_exact());
  }
}

TEST_CASE("inequality ledgers") {
  InvariantReport f5 = compute_invariants(RingDescriptor::finite_field(5));
  InequalityLedger alone = check_inequalities(f5, f5);
  CHECK(alone.consistent());
  CHECK(alone.count(InequalityCheck::Outcome::Fails) == 0);

  InvariantReport zp = compute_invariants(RingDescriptor::padic(5, 3));
  InequalityLedger hens = check_inequalities(zp, f5);
  CHECK(hens.consistent());
  bool saw_equality = false;
  for (const auto& c : hens.checks)
    if (c.name.find("henselian") != std::string::npos) {
      saw_equality = true;
      CHECK(c.outcome == InequalityCheck::Outcome::Holds);
    }
  CHECK(saw_equality);

  InvariantReport loc = compute_invariants(RingDescriptor::localized(5));
  CHECK(loc.m_invariant.value >= 4);
  CHECK_FALSE(loc.m_invariant.is_exact());
  CHECK(check_inequalities(loc, f5).consistent());

  CHECK_THROWS_AS(check_inequalities(f5, compute_invariants(RingDescriptor::finite_field(3))), DomainError);
}

TEST_CASE("m-invariant witness over Z_(p)") {
  MzpWitness w = m_zp_witness(5, 50);
  CHECK(w.concludes_m_at_least_4());
  long sum = 0;
  for (long r : w.lagrange) sum += r * r;
  CHECK(sum == 7);
  CHECK(w.lagrange.size() == 4);
  // Oracle: no (a, b, c) with |a|, |b|, |c| <= 2 has a^2 + b^2 + c^2 = 7.
  bool three = false;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      for (long c = -2; c <= 2; ++c) three = three || a * a + b * b + c * c == 7;
  CHECK_FALSE(three);
  CHECK(w.no_integer_triple);
  CHECK_NOTHROW(m_zp_witness(3, 5));
  CHECK_THROWS_AS(m_zp_witness(7, 5), DomainError);
  CHECK_THROWS_AS(m_zp_witness(5, 0), DomainError);
}

TEST_CASE("unit vectors in the complement of two unit vectors") {
  // Expected flags come from an exhaustive search with e = e_1 (the group is transitive on unit vectors).
  auto oracle_flag = [](long p, std::size_t n) {
    auto units = oracle::euclidean_vectors_with_value(p, n, 1);
    for (const auto& f : units) {
      bool common = false;
      for (const auto& w : units) {
        long wf = 0;
        for (std::size_t i = 0; i < n; ++i) wf += w[i] * f[i];
        if (w[0] % p == 0 && oracle::mod(wf, p) == 0) {
          common = true;
          break;
        }
      }
      if (!common) return false;
    }
    return true;
  };
  for (long p : {5L, 7L}) {
    ShapiroReport r = shapiro_bound_check(RingDescriptor::finite_field(static_cast<std::uint64_t>(p)), 4);
    REQUIRE(r.hypothesis_by_n.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.hypothesis_by_n[i] == oracle_flag(p, 4 + i));
    CHECK(r.pythagoras == 2);
    CHECK(r.ok());
  }
  // Over F_7 a pair in E^4 with no common orthogonal unit vector exists.
  CHECK_FALSE(oracle_flag(7, 4));
  CHECK_THROWS_AS(shapiro_bound_check(RingDescriptor::finite_field(3), 4), DomainError);
}

TEST_CASE("property: non-singular subspaces of small codimension contain unit vectors") {
  // Every non-singular V of codimension k in E^n with n > 2k, through the library's complement and search.
  struct Case {
    long p;
    std::size_t n;
  };
  for (Case c : {Case{3, 3}, Case{3, 4}, Case{3, 5}, Case{3, 6}, Case{5, 3}, Case{5, 4}, Case{5, 5}}) {
    auto F = RingDescriptor::finite_field(static_cast<std::uint64_t>(c.p));
    auto e = QuadraticModule::euclidean(F, c.n);
    std::vector<std::vector<long>> vectors;
    for (long value = 0; value < c.p; ++value)
      for (auto& v : oracle::euclidean_vectors_with_value(c.p, c.n, value)) vectors.push_back(v);
    for (std::size_t k = 1; 2 * k < c.n && k <= 2; ++k) {
      std::set<std::vector<std::vector<long>>> seen;
      std::size_t tested = 0;
      auto consider = [&](const std::vector<std::vector<long>>& rows) {
        auto key = rref(rows, c.p);
        if (key.size() != k || !seen.insert(key).second) return;
        std::vector<Vector> u;
        for (const auto& r : key) u.push_back(make_vector(F, r));
        QuadraticModule qu = restrict_to(e, u);
        if (!qu.is_nonsingular()) return;
        Submodule v = orthogonal_complement(e, u);
        QuadraticModule qv = restrict_to(e, v.basis);
        REQUIRE(qv.is_nonsingular());
        ++tested;
        CHECK(find_value(qv, Scalar::one(F)).found());
      };
      if (k == 1) {
        for (const auto& a : vectors) consider({a});
      } else {
        for (std::size_t i = 0; i < vectors.size(); ++i)
          for (std::size_t j = i + 1; j < vectors.size(); ++j) consider({vectors[i], vectors[j]});
      }
      CHECK(tested > 0);
    }
  }
}

TEST_CASE("property: over F_5 a sum of n > 2 squares is a sum of n - 1 squares") {
  auto F5 = RingDescriptor::finite_field(5);
  for (unsigned n = 3; n <= 6; ++n)
    for (long a = 0; a < 5; ++a) {
      auto longer = sum_of_squares(Scalar(F5, a), n);
      if (!longer) continue;
      auto shorter = sum_of_squares(Scalar(F5, a), n - 1);
      REQUIRE(shorter);
      Scalar total = Scalar::zero(F5);
      for (const auto& s : *shorter) total += s * s;
      CHECK(total == Scalar(F5, a));
    }
}
