#include "stiefel/invariants.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "stiefel/fp.hpp"
#include "stiefel/profile.hpp"
#include "stiefel/repsolve.hpp"

namespace stiefel {
namespace {

constexpr std::uint64_t kMaxExhaustiveModulus = 1U << 12;

// Exhaustive machinery on the finite ring Z/M (M = p for F_p, p^N for Z/p^N).
class FiniteRing {
 public:
  explicit FiniteRing(const RingDescriptor& ring) : m_(ring.modulus()), p_(ring.prime()) {
    if (m_ > kMaxExhaustiveModulus) throw DomainError("ring too large for exhaustive invariants: " + ring.name());
    squares_.assign(m_, false);
    for (std::uint64_t x = 0; x < m_; ++x) squares_[x * x % m_] = true;
    for (std::uint64_t x = 0; x < m_; ++x)
      if (x % p_ != 0) unit_reps_.push_back(x);
    // Unit square classes: 1 and the least non-square unit.
    square_class_reps_.push_back(1);
    for (std::uint64_t x : unit_reps_)
      if (!squares_[x]) {
        square_class_reps_.push_back(x);
        break;
      }
  }

  std::uint64_t modulus() const { return m_; }
  const std::vector<std::uint64_t>& units() const { return unit_reps_; }
  const std::vector<std::uint64_t>& square_classes() const { return square_class_reps_; }

  // S_1, S_2, ... until the chain stabilizes; element k-1 is S_k.
  std::vector<std::vector<bool>> sums_of_squares_chain() const {
    std::vector<std::vector<bool>> chain{squares_};
    while (true) {
      std::vector<bool> next(m_, false);
      for (std::uint64_t a = 0; a < m_; ++a)
        if (chain.back()[a])
          for (std::uint64_t b = 0; b < m_; ++b)
            if (squares_[b]) next[(a + b) % m_] = true;
      if (next == chain.back()) return chain;
      chain.push_back(std::move(next));
    }
  }

  // Values of sum a_i x_i^2 over primitive vectors x (some coordinate a unit).
  std::vector<bool> primitive_values(const std::vector<std::uint64_t>& diag) const {
    // state index: value * 2 + (has unit coordinate)
    std::vector<bool> state(2 * m_, false);
    state[0] = true;
    for (std::uint64_t a : diag) {
      std::set<std::pair<std::uint64_t, bool>> steps;
      for (std::uint64_t x = 0; x < m_; ++x) steps.insert({a * (x * x % m_) % m_, x % p_ != 0});
      std::vector<bool> next(2 * m_, false);
      for (std::uint64_t v = 0; v < m_; ++v)
        for (int f = 0; f < 2; ++f) {
          if (!state[2 * v + f]) continue;
          for (const auto& [dv, unit] : steps) next[2 * ((v + dv) % m_) + ((f != 0) || unit)] = true;
        }
      state = std::move(next);
    }
    std::vector<bool> out(m_, false);
    for (std::uint64_t v = 0; v < m_; ++v) out[v] = state[2 * v + 1];
    return out;
  }

 private:
  std::uint64_t m_;
  std::uint64_t p_;
  std::vector<bool> squares_;
  std::vector<std::uint64_t> unit_reps_;
  std::vector<std::uint64_t> square_class_reps_;
};

// Visits nondecreasing tuples of length d drawn from `pool`; stops when visit returns false.
bool all_tuples(const std::vector<std::uint64_t>& pool, std::size_t d,
                const std::function<bool(const std::vector<std::uint64_t>&)>& visit) {
  std::vector<std::size_t> idx(d, 0);
  std::vector<std::uint64_t> t(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) t[i] = pool[idx[i]];
    if (!visit(t)) return false;
    std::size_t i = d;
    while (i > 0 && idx[i - 1] + 1 == pool.size()) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < d; ++j) idx[j] = idx[i - 1];
  }
}

InvariantReport finite_invariants(const RingDescriptor& ring, const InvariantOptions& options) {
  const FiniteRing fr(ring);
  const std::uint64_t m = fr.modulus();
  InvariantReport rep{ring, {}, {}, {}, {}, 0};
  const bool field = ring.kind() == RingKind::FiniteField;
  const std::string how = field ? "exhaustive over F_p" : "exhaustive over Z/p^N";

  const auto chain = fr.sums_of_squares_chain();
  rep.pythagoras = InvariantValue::exact(static_cast<unsigned>(chain.size()), how + ": S_k chain stabilizes");
  std::optional<unsigned> stufe;
  for (std::size_t k = 0; k < chain.size() && !stufe; ++k)
    if (chain[k][m - 1]) stufe = static_cast<unsigned>(k + 1);
  rep.stufe = stufe ? InvariantValue::exact(*stufe, how + ": -1 in S_s")
                    : InvariantValue::exact(0, how + ": -1 is not a sum of squares");

  // F_p: every unit entry; Z/p^N: unit square-class representatives (scaling an
  // entry by a unit square is an isometry).
  const std::vector<std::uint64_t>& pool = field ? fr.units() : fr.square_classes();
  const std::string entries = field ? "all diagonal forms" : "square-class diagonal forms";
  for (unsigned d = 1;; ++d) {
    if (d > options.max_form_rank + 1) throw Error("u-invariant search exceeded the form rank limit");
    const bool all_isotropic = all_tuples(pool, d, [&](const auto& diag) -> bool { return fr.primitive_values(diag)[0]; });
    if (all_isotropic) {
      rep.u_invariant = InvariantValue::exact(d - 1, how + ", " + entries + " of rank " + std::to_string(d) +
                                                         " are isotropic");
      break;
    }
  }
  for (unsigned d = 1;; ++d) {
    if (d > options.max_form_rank + 1) throw Error("m-invariant search exceeded the form rank limit");
    // Every unit of these rings is a sum of squares, so every diagonal unit form embeds in some E^n.
    const bool all_represent = all_tuples(pool, d, [&](const auto& diag) -> bool { return fr.primitive_values(diag)[1]; });
    if (all_represent) {
      rep.m_invariant = InvariantValue::exact(d, how + ", " + entries + " of rank " + std::to_string(d) +
                                                     " represent 1");
      break;
    }
  }
  return rep;
}

InvariantReport infinite_invariants(const RingDescriptor& ring, const InvariantOptions& options) {
  InvariantReport rep{ring, {}, {}, {}, {}, options.height_bound};
  const std::string at = " at height " + std::to_string(options.height_bound);
  const auto h = static_cast<unsigned long>(options.height_bound);

  unsigned p_lower = 1;
  for (long a : {1L, 2L, 3L, 7L}) {
    for (unsigned k = 1; k <= options.max_squares; ++k)
      if (sum_of_squares(Scalar(ring, a), k, h)) {
        p_lower = std::max(p_lower, k);
        break;
      }
  }
  rep.pythagoras = InvariantValue::at_least(p_lower, "7 needs " + std::to_string(p_lower) + " squares" + at);

  unsigned tried = 0;
  for (unsigned k = 1; k <= options.max_squares; ++k, ++tried)
    if (sum_of_squares(Scalar(ring, -1L), k, h)) break;
  rep.stufe = InvariantValue::at_least(tried + 1, "-1 is not a sum of " + std::to_string(tried) + " squares" + at);

  const QuadraticModule e = QuadraticModule::euclidean(ring, options.max_form_rank);
  SearchOptions so;
  so.height_bound = std::min<long>(options.height_bound, 6);
  if (find_isotropic(e, so).found()) throw Error("Euclidean form found isotropic over an ordered field");
  rep.u_invariant = InvariantValue::at_least(options.max_form_rank,
                                             "E^" + std::to_string(options.max_form_rank) +
                                                 " is positive definite, hence anisotropic");

  const std::uint64_t witness_prime = ring.kind() == RingKind::LocalizedAtP ? ring.prime() : 3;
  if (witness_prime == 7) {
    rep.m_invariant = InvariantValue::at_least(1, "the 1/7 witness needs p != 7");
    return rep;
  }
  const MzpWitness w = m_zp_witness(witness_prime, options.height_bound);
  if (w.concludes_m_at_least_4())
    rep.m_invariant = InvariantValue::at_least(4, "3<1/7> in E^12 has no unit vector" + at);
  else
    rep.m_invariant = InvariantValue::at_least(1, "no witness");
  return rep;
}

using Outcome = InequalityCheck::Outcome;

// a <= b for values that are exact or lower bounds. Stufe 0 encodes "infinite".
Outcome leq(const InvariantValue& a, const InvariantValue& b) {
  const unsigned av = a.value;
  if (a.is_exact() && b.is_exact()) return av <= b.value ? Outcome::Holds : Outcome::Fails;
  if (a.is_exact()) return av <= b.value ? Outcome::Holds : Outcome::Undetermined;
  if (b.is_exact()) return av > b.value ? Outcome::Fails : Outcome::Undetermined;
  return Outcome::Undetermined;
}

Outcome equal(const InvariantValue& a, const InvariantValue& b) {
  if (a.is_exact() && b.is_exact()) return a.value == b.value ? Outcome::Holds : Outcome::Fails;
  if (a.is_exact() && b.value > a.value) return Outcome::Fails;
  if (b.is_exact() && a.value > b.value) return Outcome::Fails;
  return Outcome::Undetermined;
}

bool stufe_infinite(const InvariantValue& s) { return s.is_exact() && s.value == 0; }

void add(InequalityLedger& ledger, std::string name, Outcome o, const InvariantValue& a, const InvariantValue& b) {
  ledger.checks.push_back({std::move(name), o, a.to_string() + " vs " + b.to_string()});
}

void own_inequalities(InequalityLedger& ledger, const InvariantReport& r) {
  const std::string n = r.ring.name();
  add(ledger, n + ": P <= m", leq(r.pythagoras, r.m_invariant), r.pythagoras, r.m_invariant);
  Outcome ps = Outcome::Holds;
  InvariantValue s1 = r.stufe;  // stays "inf" when the Stufe is infinite
  if (!stufe_infinite(r.stufe)) {
    s1.value += 1;
    ps = leq(r.pythagoras, s1);
  }
  add(ledger, n + ": P <= s+1", ps, r.pythagoras, s1);
  add(ledger, n + ": s <= u", stufe_infinite(r.stufe) ? Outcome::Undetermined : leq(r.stufe, r.u_invariant),
      r.stufe, r.u_invariant);
  add(ledger, n + ": m <= u", leq(r.m_invariant, r.u_invariant), r.m_invariant, r.u_invariant);
}

}  // namespace

std::string InvariantValue::to_string() const {
  if (is_exact() && value == 0) return "inf";
  return (is_exact() ? "" : ">=") + std::to_string(value);
}

std::string InvariantReport::to_string() const {
  std::ostringstream os;
  os << ring.name() << ": P=" << pythagoras.to_string() << " s=" << stufe.to_string()
     << " u=" << u_invariant.to_string() << " m=" << m_invariant.to_string();
  if (search_bound) os << " (height " << search_bound << ")";
  return os.str();
}

InvariantReport compute_invariants(const RingDescriptor& ring, const InvariantOptions& options) {
  switch (ring.kind()) {
    case RingKind::FiniteField:
    case RingKind::PadicTruncated: return finite_invariants(ring, options);
    case RingKind::Rationals:
    case RingKind::LocalizedAtP: return infinite_invariants(ring, options);
    case RingKind::Integers: break;
  }
  throw DomainError("compute_invariants does not support Z");
}

bool InequalityLedger::consistent() const { return count(Outcome::Fails) == 0; }

std::size_t InequalityLedger::count(Outcome o) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const InequalityCheck& c) { return c.outcome == o; }));
}

std::string InequalityLedger::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    const char* tag = c.outcome == Outcome::Holds ? "holds" : c.outcome == Outcome::Fails ? "FAILS" : "undetermined";
    os << c.name << ": " << tag << " (" << c.detail << ")\n";
  }
  return os.str();
}

InequalityLedger check_inequalities(const InvariantReport& ring, const InvariantReport& residue,
                                    const std::optional<InvariantReport>& quotient) {
  const RingDescriptor& a = ring.ring;
  const RingDescriptor expected_residue = a.is_field() ? a : a.residue_field();
  if (!(residue.ring == expected_residue)) throw DomainError("residue report is not for the residue field of " + a.name());
  if (quotient) {
    bool ok = false;
    switch (a.kind()) {
      case RingKind::FiniteField:
      case RingKind::Rationals: ok = quotient->ring == a; break;
      case RingKind::LocalizedAtP: ok = quotient->ring == RingDescriptor::rationals(); break;
      default: ok = false;
    }
    if (!ok) throw DomainError("quotient report is not for the quotient field of " + a.name());
  }
  InequalityLedger ledger;
  own_inequalities(ledger, ring);
  if (!(residue.ring == a)) own_inequalities(ledger, residue);
  if (quotient && !(quotient->ring == a)) own_inequalities(ledger, *quotient);

  add(ledger, "m_k <= m_A", leq(residue.m_invariant, ring.m_invariant), residue.m_invariant, ring.m_invariant);
  add(ledger, "P(k) <= P(A)", leq(residue.pythagoras, ring.pythagoras), residue.pythagoras, ring.pythagoras);
  add(ledger, "s(k) <= s(A)",
      stufe_infinite(ring.stufe) ? Outcome::Holds
      : stufe_infinite(residue.stufe) ? Outcome::Fails
                                      : leq(residue.stufe, ring.stufe),
      residue.stufe, ring.stufe);
  add(ledger, "u(k) <= u(A)", leq(residue.u_invariant, ring.u_invariant), residue.u_invariant, ring.u_invariant);
  if (ArithmeticProfile::for_ring(a).henselian) {
    add(ledger, "m_k = m_A (henselian)", equal(residue.m_invariant, ring.m_invariant), residue.m_invariant,
        ring.m_invariant);
    add(ledger, "s(k) = s(A) (henselian)", equal(residue.stufe, ring.stufe), residue.stufe, ring.stufe);
    add(ledger, "u(k) = u(A) (henselian)", equal(residue.u_invariant, ring.u_invariant), residue.u_invariant,
        ring.u_invariant);
  }
  return ledger;
}

std::string MzpWitness::to_string() const {
  std::ostringstream os;
  os << "p=" << p << " H=" << height << " 7=";
  for (std::size_t i = 0; i < lagrange.size(); ++i) os << (i ? "+" : "") << lagrange[i] * lagrange[i];
  os << " four-squares(1/7)=" << inverse_is_four_squares << " embedding=" << embedding_verified
     << " no-rational-triple=" << no_rational_triple_within_height << " no-integer-triple=" << no_integer_triple
     << " => m>=4: " << (concludes_m_at_least_4() ? "yes" : "no");
  return os.str();
}

MzpWitness m_zp_witness(std::uint64_t p, long height) {
  if (p == 2 || !is_prime(p)) throw DomainError("m_zp_witness needs an odd prime");
  if (p == 7) throw DomainError("m_zp_witness needs p not dividing 7");
  if (height < 1) throw DomainError("m_zp_witness needs a positive height");
  const RingDescriptor zp = RingDescriptor::localized(p);
  const RingDescriptor z = RingDescriptor::integers();
  MzpWitness w{p, height, {}, false, false, false, false, Matrix(zp, 12, 3)};

  const auto four = sum_of_squares(Scalar(z, 7L), 4, 3);
  if (!four) throw Error("Lagrange decomposition of 7 not found");
  std::vector<long> r;
  for (const Scalar& x : *four) r.push_back(x.to_rational().get_num().get_si());
  std::sort(r.rbegin(), r.rend());
  w.lagrange = r;

  const Scalar seventh = Scalar::from_rational(zp, mpq_class(1, 7));
  Scalar sum = Scalar::zero(zp);
  for (long rj : r) {
    const Scalar x = Scalar::from_rational(zp, mpq_class(rj, 7));
    sum += x * x;
  }
  w.inverse_is_four_squares = sum == seventh;

  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t j = 0; j < 4; ++j) w.embedding.at(4 * b + j, b) = Scalar::from_rational(zp, mpq_class(r[j], 7));
  std::vector<Vector> cols{w.embedding.column(0), w.embedding.column(1), w.embedding.column(2)};
  const QuadraticModule restricted = restrict_to(QuadraticModule::euclidean(zp, 12), cols);
  const Matrix residues = [&] {
    Matrix m(RingDescriptor::finite_field(p), 12, 3);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = residue(w.embedding.at(i, j));
    return m;
  }();
  w.embedding_verified = restricted.gram() == Matrix::diagonal({seventh, seventh, seventh}) &&
                         restricted.is_nonsingular() && rank(residues) == 3;

  // A unit vector (x, y, z) of 3<1/7> is a rational solution of x^2 + y^2 + z^2 = 7.
  w.no_rational_triple_within_height =
      !sum_of_squares(Scalar(RingDescriptor::rationals(), 7L), 3, static_cast<unsigned long>(height));
  bool none = true;
  for (long x = -2; x <= 2; ++x)
    for (long y = -2; y <= 2; ++y)
      for (long zc = -2; zc <= 2; ++zc)
        if (x * x + y * y + zc * zc == 7) none = false;
  w.no_integer_triple = none;
  return w;
}

bool ShapiroReport::hypothesis_holds() const {
  return std::all_of(hypothesis_by_n.begin(), hypothesis_by_n.end(), [](bool b) { return b; });
}

ShapiroReport shapiro_bound_check(const RingDescriptor& field, unsigned k) {
  if (field.kind() != RingKind::FiniteField) throw DomainError("shapiro_bound_check needs a finite field");
  if (field.prime() == 3) throw DomainError("the Shapiro bound fails over F_3; refusing to test it");
  if (k < 2) throw DomainError("shapiro_bound_check needs k >= 2");
  ShapiroReport rep;
  rep.p = field.prime();
  rep.k = k;
  const fp::Field f(static_cast<std::uint32_t>(field.prime()));
  constexpr std::size_t kFullPairsLimit = 4000;
  for (unsigned n = k; n <= k + 2; ++n) {
    const fp::Form q = fp::Form::euclidean(f, n);
    const fp::VectorTable units = fp::vectors_with_value(q, 1);
    const fp::OrthogonalityGraph g = fp::orthogonality_graph(q, units);
    const std::size_t count = units.size();
    const bool full = count <= kFullPairsLimit;
    rep.orbit_reduced = rep.orbit_reduced || !full;
    std::vector<std::size_t> firsts;
    if (full) {
      for (std::size_t i = 0; i < count; ++i) firsts.push_back(i);
    } else {
      // O(E^n) is transitive on unit vectors, so e = e_1 suffices.
      std::vector<std::uint32_t> e1(n, 0);
      e1[0] = 1;
      firsts.push_back(*units.find_sorted(e1.data()));
    }
    bool holds = true;
    for (std::size_t i : firsts) {
      for (std::size_t j = full ? i : 0; j < count && holds; ++j) {
        const std::uint64_t* a = g.row(i);
        const std::uint64_t* b = g.row(j);
        bool common = false;
        for (std::size_t w = 0; w < g.words() && !common; ++w) common = (a[w] & b[w]) != 0;
        holds = common;
      }
      if (!holds) break;
    }
    rep.hypothesis_by_n.push_back(holds);
  }
  rep.pythagoras = compute_invariants(field).pythagoras.value;
  return rep;
}

}  // namespace stiefel
