#include <algorithm>

#include "stiefel/error.hpp"
#include "stiefel/stability.hpp"

namespace stiefel {
namespace {

enum class Source { MRing, MQuotient, PResidue, PQuotient };

const char* symbol(Source s) {
  switch (s) {
    case Source::MRing: return "m_A";
    case Source::MQuotient: return "m_K";
    case Source::PResidue: return "P(k)";
    case Source::PQuotient: return "P(K)";
  }
  return "";
}

bool quotient_side(Source s) { return s == Source::MQuotient || s == Source::PQuotient; }

long require(const ArithmeticInputs& a, Source s) {
  const std::optional<long>* v = nullptr;
  switch (s) {
    case Source::MRing: v = &a.m_ring; break;
    case Source::MQuotient: v = &a.m_quotient; break;
    case Source::PResidue: v = &a.pythagoras_residue; break;
    case Source::PQuotient: v = &a.pythagoras_quotient; break;
  }
  if (!v->has_value()) throw DomainError(std::string("range formula needs a finite ") + symbol(s));
  if (**v < 1) throw DomainError(std::string(symbol(s)) + " must be positive");
  return **v;
}

enum Flag : unsigned {
  kHenselian = 1,
  kRingReal = 2,
  kResidueReal = 4,
  kQuotientReal = 8,
};

std::vector<std::string> check_flags(const ArithmeticInputs& a, unsigned flags) {
  std::vector<std::string> out;
  auto need = [&](unsigned f, bool have, const char* text) {
    if (!(flags & f)) return;
    if (!have) throw DomainError(std::string("hypothesis not met: ") + text);
    out.emplace_back(text);
  };
  need(kHenselian, a.henselian, "A henselian");
  need(kRingReal, a.ring_formally_real, "A formally real");
  need(kResidueReal, a.residue_formally_real, "residue field formally real");
  need(kQuotientReal, a.quotient_formally_real, "quotient field formally real");
  return out;
}

mpq_class frac(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

struct CaseShape {
  Source source;
  unsigned flags;
};

// Shapes shared by the constant, polynomial and connectivity tables.
CaseShape eight_case_shape(unsigned idx, Reading reading, bool polynomial) {
  switch (idx) {
    case 1: return {Source::MRing, 0};
    case 2:
      if (polynomial) return {Source::MRing, kResidueReal};
      return {Source::MRing, reading == Reading::Literal ? kRingReal : kResidueReal};
    case 3: return {Source::PResidue, kHenselian};
    case 4: return {Source::PResidue, kHenselian | kResidueReal};
    case 5: return {Source::MQuotient, 0};
    case 6: return {Source::MQuotient, kQuotientReal};
    case 7: return {Source::PQuotient, 0};
    case 8: return {Source::PQuotient, kQuotientReal};
    default: throw DomainError("case index must be 1..8");
  }
}

void reject_henselian_quotient(const ArithmeticInputs& a, Source s) {
  if (a.henselian && quotient_side(s))
    throw DomainError("inconsistent flags: henselian set for a quotient-field case");
}

std::string with_symbol(std::string text, Source s) {
  std::string sym = symbol(s);
  for (std::size_t pos; (pos = text.find('#')) != std::string::npos;) text.replace(pos, 1, sym);
  return text;
}

RangeResult finish(std::string theorem, unsigned idx, const mpq_class& surj, const mpq_class& iso,
                   std::string formula, std::vector<std::string> hyps) {
  RangeResult r;
  r.theorem = std::move(theorem);
  r.case_label = roman(idx);
  r.surjective_bound = surj;
  r.isomorphism_bound = iso;
  r.surjective_up_to = floor_of(surj);
  r.isomorphism_up_to = floor_of(iso);
  r.formula = std::move(formula);
  r.hypotheses = std::move(hyps);
  return r;
}

}  // namespace

ArithmeticInputs ArithmeticInputs::from_profile(const ArithmeticProfile& p) {
  ArithmeticInputs a;
  auto cast = [](const std::optional<unsigned>& v) -> std::optional<long> {
    if (!v) return std::nullopt;
    return static_cast<long>(*v);
  };
  a.m_ring = cast(p.m_ring);
  a.m_quotient = cast(p.m_quotient);
  a.pythagoras_residue = cast(p.pythagoras_residue);
  a.pythagoras_quotient = cast(p.pythagoras_quotient);
  a.henselian = p.henselian;
  a.residue_formally_real = p.residue_formally_real;
  a.quotient_formally_real = p.quotient_formally_real;
  a.ring_formally_real = p.quotient_formally_real;  // A embeds in K
  return a;
}

long floor_of(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}

std::string roman(unsigned k) {
  static const char* names[] = {"", "i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};
  if (k == 0 || k > 8) return "(?)";
  return std::string("(") + names[k] + ")";
}

RangeResult range_constant(const RangeInputs& in) {
  CaseShape shape = eight_case_shape(in.case_index, in.reading, false);
  reject_henselian_quotient(in.arithmetic, shape.source);
  long v = require(in.arithmetic, shape.source);
  auto hyps = check_flags(in.arithmetic, shape.flags);
  long n = in.n;
  mpq_class surj, iso;
  std::string formula;
  switch (in.case_index) {
    case 1:
    case 5:
      surj = frac(n - v - 1, 3);
      iso = frac(n - v - 2, 3);
      formula = "surj i <= (n-#-1)/3; iso i <= (n-#-2)/3";
      break;
    case 2:
    case 6:
      surj = frac(n - v, 2);
      iso = frac(n - v - 1, 2);
      formula = "surj i <= (n-#)/2; iso i <= (n-#-1)/2";
      break;
    case 3:
    case 7:
      surj = frac(n - 3 - 2 * v, 2 * v + 1);
      iso = frac(n - 4 - 2 * v, 2 * v + 1);
      formula = "surj i <= (n-3-2#)/(2#+1); iso i <= (n-4-2#)/(2#+1)";
      break;
    default:
      surj = frac(n - 2 - v, v + 1);
      iso = frac(n - 3 - v, v + 1);
      formula = "surj i <= (n-2-#)/(#+1); iso i <= (n-3-#)/(#+1)";
      break;
  }
  return finish("constant", in.case_index, surj, iso, with_symbol(formula, shape.source), std::move(hyps));
}

RangeResult range_abelian(const RangeInputs& in) {
  CaseShape shape;
  switch (in.case_index) {
    case 1: shape = {Source::MRing, 0}; break;
    case 2: shape = {Source::PResidue, kHenselian}; break;
    case 3: shape = {Source::PResidue, kHenselian | kResidueReal}; break;
    case 4: shape = {Source::MQuotient, 0}; break;
    case 5: shape = {Source::PQuotient, 0}; break;
    case 6: shape = {Source::PQuotient, kQuotientReal}; break;
    default: throw DomainError("abelian case index must be 1..6");
  }
  reject_henselian_quotient(in.arithmetic, shape.source);
  long v = require(in.arithmetic, shape.source);
  auto hyps = check_flags(in.arithmetic, shape.flags);
  long n = in.n;
  mpq_class surj, iso;
  std::string formula;
  switch (in.case_index) {
    case 1:
    case 4:
      surj = frac(n - v - 2, 3);
      iso = frac(n - v - 4, 3);
      formula = "surj i <= (n-#-2)/3; iso i <= (n-#-4)/3";
      break;
    case 2:
    case 5:
      // Numerator kept as written: n - 2P - 2P - 2.
      surj = frac(n - 2 * v - 2 * v - 2, 2 * v + 1);
      iso = frac(n - 2 * v - 2 * v - 4, 2 * v + 1);
      formula = "surj i <= (n-2#-2#-2)/(2#+1); iso i <= (n-2#-2#-4)/(2#+1)";
      break;
    default: {
      long den = std::max(3L, v + 1);
      surj = frac(n - v - den, den);
      iso = frac(n - v - 2 - den, den);
      formula = "D = max{3, #+1}; surj i <= (n-#-D)/D; iso i <= (n-#-2-D)/D";
      break;
    }
  }
  return finish("abelian", in.case_index, surj, iso, with_symbol(formula, shape.source), std::move(hyps));
}

RangeResult range_polynomial(const RangeInputs& in) {
  if (in.degree < -1) throw DomainError("coefficient degree must be at least -1");
  CaseShape shape = eight_case_shape(in.case_index, in.reading, true);
  reject_henselian_quotient(in.arithmetic, shape.source);
  long v = require(in.arithmetic, shape.source);
  auto hyps = check_flags(in.arithmetic, shape.flags);
  long n = in.n;
  mpq_class base;
  std::string formula;
  switch (in.case_index) {
    case 1:
    case 5:
      base = frac(n - v - 1, 3);
      formula = "surj i <= (n-#-1)/3 - r; iso i <= (n-#-1)/3 - r - 1";
      break;
    case 2:
    case 6:
      base = frac(n - v, 2);
      formula = "surj i <= (n-#)/2 - r; iso i <= (n-#)/2 - r - 1";
      break;
    case 3:
    case 7:
      base = frac(n - 3 - 2 * v, 2 * v + 1);
      formula = "surj i <= (n-3-2#)/(2#+1) - r; iso i <= (n-3-2#)/(2#+1) - r - 1";
      break;
    default:
      base = frac(n - 2 - v, v + 1);
      formula = "surj i <= (n-2-#)/(#+1) - r; iso i <= (n-2-#)/(#+1) - r - 1";
      break;
  }
  mpq_class surj = base - in.degree;
  mpq_class iso = surj - 1;
  return finish("polynomial", in.case_index, surj, iso, with_symbol(formula, shape.source), std::move(hyps));
}

RangeResult range_for(StabilityTheorem theorem, const RangeInputs& in) {
  switch (theorem) {
    case StabilityTheorem::Constant: return range_constant(in);
    case StabilityTheorem::Abelian: return range_abelian(in);
    case StabilityTheorem::Polynomial: return range_polynomial(in);
  }
  throw DomainError("unknown theorem");
}

unsigned case_count(StabilityTheorem theorem) { return theorem == StabilityTheorem::Abelian ? 6 : 8; }

ConnectivityRange connectivity_range(unsigned idx, long n, const ArithmeticInputs& a, Reading reading) {
  ConnectivityRange r;
  r.case_label = roman(idx);
  r.reading = reading;
  bool literal = reading == Reading::Literal;
  Source source;
  unsigned flags = 0;
  switch (idx) {
    case 1: source = Source::MRing; break;
    case 2: source = Source::PResidue; break;
    case 3: source = Source::MRing; break;
    case 4: source = Source::PResidue; flags = kHenselian; break;
    case 5: source = Source::MQuotient; break;
    case 6: source = Source::PQuotient; break;
    case 7:
      source = literal ? Source::MRing : Source::MQuotient;
      flags = kQuotientReal;
      break;
    case 8:
      source = literal ? Source::PResidue : Source::PQuotient;
      flags = kQuotientReal;
      break;
    default: throw DomainError("connectivity case index must be 1..8");
  }
  long v = require(a, source);
  r.hypotheses = check_flags(a, flags);
  // The literal last two items state finiteness of the quotient invariant but use another symbol.
  if (literal && idx == 7) {
    require(a, Source::MQuotient);
    r.hypotheses.emplace_back("m_K finite");
  }
  if (literal && idx == 8) {
    require(a, Source::PQuotient);
    r.hypotheses.emplace_back("P(K) finite");
  }
  std::string formula;
  switch (idx) {
    case 1:
    case 5:
      r.bound = frac(n - v - 3, 3);
      formula = "(n-#-3)/3";
      break;
    case 2:
    case 6:
      r.bound = frac(n - 5 - 2 * v, 2 * v + 1);
      formula = "(n-5-2#)/(2#+1)";
      break;
    case 3:
    case 7:
      r.bound = frac(n - v - 2, 2);
      formula = "(n-#-2)/2";
      break;
    default:
      r.bound = frac(n - 4 - v, v + 1);
      formula = "(n-4-#)/(#+1)";
      break;
  }
  r.formula = with_symbol(formula, source) + "-connected";
  r.connected_through = floor_of(r.bound);
  return r;
}

std::vector<IntersectionCase> intersection_cases(const ArithmeticInputs& a, long n, long l, long r, long s) {
  std::vector<IntersectionCase> out;
  long rr = r + l - 1, ss = s + l - 1;
  for (unsigned idx = 1; idx <= 8; ++idx) {
    IntersectionCase c;
    c.case_label = roman(idx);
    bool residue = idx <= 4;
    bool real_case = idx == 3 || idx == 4 || idx == 7 || idx == 8;
    bool uses_m = idx == 1 || idx == 3 || idx == 5 || idx == 7;
    c.hypotheses_hold = (!residue || a.henselian) &&
                        (!real_case || (residue ? a.residue_formally_real : a.quotient_formally_real));
    std::optional<long> v = uses_m ? (residue ? a.m_ring : a.m_quotient)
                                   : (residue ? a.pythagoras_residue : a.pythagoras_quotient);
    if (v) {
      long coefficient = real_case ? 1 : 2;
      if (uses_m)
        c.threshold = coefficient * rr + ss + *v;
      else
        c.threshold = coefficient * *v * rr + ss + 1;
    }
    c.satisfied = c.hypotheses_hold && c.threshold && n >= *c.threshold && r >= s && s >= 0 && l >= 1;
    out.push_back(c);
  }
  return out;
}

CorollaryRange intro_corollary_range(unsigned corollary, char item, long n, const ArithmeticInputs& a, long d) {
  CorollaryRange c;
  c.corollary = corollary;
  if (corollary == 3) {
    c.bound = frac(n - 8, 2);
    c.formula = "i <= (n-8)/2";
    c.up_to = floor_of(c.bound);
    return c;
  }
  if (corollary != 1 && corollary != 2) throw DomainError("corollary must be 1, 2 or 3");
  if (item < 'a' || item > 'd') throw DomainError("corollary item must be a..d");
  c.item = std::string("(") + item + ")";
  bool real_item = item == 'b' || item == 'd';
  if (real_item && !a.quotient_formally_real) throw DomainError("hypothesis not met: quotient field formally real");
  bool uses_m = item == 'a' || item == 'b';
  long v = require(a, uses_m ? Source::MQuotient : Source::PQuotient);
  if (corollary == 1) {
    if (d < 1) throw DomainError("exterior degree d must be at least 1");
    switch (item) {
      case 'a': c.bound = frac(n - v - 3 * d - 4, 3); c.formula = "3i <= n-m_K-3d-4"; break;
      case 'b': c.bound = frac(n - v - 2 * d - 2, 2); c.formula = "2i <= n-m_K-2d-2"; break;
      case 'c':
        c.bound = frac(n - 3 - 2 * v - (d + 1) * (2 * v + 1), 2 * v + 1);
        c.formula = "(2P(K)+1)i <= n-3-2P(K)-(d+1)(2P(K)+1)";
        break;
      default:
        c.bound = frac(n - 2 - v - (d + 1) * (v + 1), v + 1);
        c.formula = "(P(K)+1)i <= n-2-P(K)-(d+1)(P(K)+1)";
        break;
    }
  } else {
    switch (item) {
      case 'a': c.bound = frac(n - v - 10, 3); c.formula = "i <= (n-m_K-10)/3"; break;
      case 'b': c.bound = frac(n - v - 6, 2); c.formula = "i <= (n-m_K-6)/2"; break;
      case 'c': c.bound = frac(n - 3 - 2 * v, 2 * v + 1) - 3; c.formula = "i <= (n-3-2P(K))/(2P(K)+1) - 3"; break;
      default: c.bound = frac(n - 2 - v, v + 1) - 3; c.formula = "i <= (n-2-P(K))/(P(K)+1) - 3"; break;
    }
  }
  c.up_to = floor_of(c.bound);
  return c;
}

CoefficientDegree direct_sum(const CoefficientDegree& a, const CoefficientDegree& b) {
  if (a.level != b.level) throw DomainError("direct_sum: degrees must be stated at the same level");
  return {std::max(a.degree, b.degree), a.level};
}

DegreeValidation validate_degree_claim(const DegreeClaim& claim) {
  auto reject = [](std::string why) { return DegreeValidation{false, std::move(why)}; };
  std::string where = "degree " + std::to_string(claim.degree) + " at " + std::to_string(claim.level);
  if (claim.degree < 0) {
    if (!claim.vanishes_from) return reject(where + ": negative degree needs a vanishing rank");
    if (*claim.vanishes_from > claim.level)
      return reject(where + ": system is nonzero at rank " + std::to_string(claim.level));
    return {};
  }
  if (!claim.kernel || !claim.cokernel) return reject(where + ": needs kernel and cokernel claims");
  if (claim.kernel->degree != -1 || claim.kernel->level != claim.level)
    return reject(where + ": kernel must have degree -1 at " + std::to_string(claim.level));
  if (claim.cokernel->degree != claim.degree - 1 || claim.cokernel->level != claim.level - 1)
    return reject(where + ": cokernel must have degree " + std::to_string(claim.degree - 1) + " at " +
                  std::to_string(claim.level - 1));
  for (const auto* part : {claim.kernel.get(), claim.cokernel.get()}) {
    DegreeValidation v = validate_degree_claim(*part);
    if (!v.accepted) return reject(where + " <- " + v.reason);
  }
  return {};
}

}  // namespace stiefel
