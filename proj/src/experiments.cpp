#include "stiefel/experiments.hpp"

#include <algorithm>
#include <random>

#include "stiefel/error.hpp"
#include "stiefel/fp.hpp"
#include "stiefel/isometry.hpp"
#include "stiefel/repsolve.hpp"
#include "stiefel/stability.hpp"

namespace stiefel {
namespace {

using Coords = std::vector<std::uint32_t>;

/// Ordered k-frames of a form over F_p as coordinate lists.
std::vector<std::vector<Coords>> ordered_frames(const fp::Form& form, std::size_t k) {
  fp::VectorTable units = fp::vectors_with_value(form, 1);
  fp::OrthogonalityGraph g = fp::orthogonality_graph(form, units);
  std::vector<std::vector<Coords>> out;
  std::vector<std::uint32_t> tuple;
  auto rec = [&](auto&& self) -> void {
    if (tuple.size() == k) {
      std::vector<Coords> frame;
      for (std::uint32_t x : tuple) frame.emplace_back(units[x], units[x] + form.dim());
      out.push_back(std::move(frame));
      return;
    }
    for (std::uint32_t x = 0; x < units.size(); ++x) {
      bool fits = std::all_of(tuple.begin(), tuple.end(), [&](std::uint32_t y) { return g.adjacent(x, y); });
      if (!fits) continue;
      tuple.push_back(x);
      self(self);
      tuple.pop_back();
    }
  };
  rec(rec);
  return out;
}

Coords apply(const fp::Field& f, const fp::Mat& m, const Coords& x) {
  std::size_t n = x.size();
  Coords y(n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) y[r] = f.add(y[r], f.mul(m[r * n + c], x[c]));
  return y;
}

}  // namespace

HomogeneityReport homogeneity_check(std::uint32_t p, std::size_t n, std::size_t k) {
  fp::Form form = fp::Form::euclidean(fp::Field(p), n);
  HomogeneityReport rep;
  rep.p = p;
  rep.n = n;
  rep.k = k;
  auto frames = ordered_frames(form, k);
  rep.frames = frames.size();
  for (const auto& f1 : frames)
    for (const auto& f2 : frames) {
      ++rep.pairs;
      fp::Mat m;
      try {
        m = fp::frame_transport(form, f1, f2);
      } catch (const Error& e) {
        rep.result.fail(std::string("transport threw: ") + e.what());
        return rep;
      }
      bool ok = fp::preserves_form(form, m);
      for (std::size_t i = 0; i < k && ok; ++i) ok = apply(form.field(), m, f1[i]) == f2[i];
      if (!ok) {
        rep.result.fail("transport does not carry frame " + std::to_string(rep.pairs - 1) + " correctly");
        return rep;
      }
    }
  return rep;
}

StabilizerReport stabilizer_check(std::uint32_t p, std::size_t n) {
  if (n < 2) throw DomainError("stabilizer_check: n must be at least 2");
  RingDescriptor ring = RingDescriptor::finite_field(p);
  QuadraticModule q = QuadraticModule::euclidean(ring, n);
  FiniteOrthogonalGroup g = enumerate_group(q);
  StabilizerReport rep;
  rep.p = p;
  rep.n = n;
  rep.group_order = g.order();
  QuadraticModule line = QuadraticModule::euclidean(ring, 1);
  Vector last = basis_vector(ring, n, n - 1);
  for (std::size_t i = 0; i < g.order(); ++i) {
    Isometry phi = g.element(i);
    if (!(phi.apply(last) == last)) continue;
    ++rep.stabilizer_order;
    Isometry back = direct_sum_identity(stabilizer_restrict(phi, n - 1), line);
    if (!(back == phi)) rep.result.fail("round trip changes element " + std::to_string(i));
  }
  return rep;
}

FactorizationReport factor_orthogonal_group(std::uint32_t p, std::size_t n) {
  RingDescriptor ring = RingDescriptor::finite_field(p);
  QuadraticModule q = QuadraticModule::euclidean(ring, n);
  FiniteOrthogonalGroup g = enumerate_group(q);
  FactorizationReport rep;
  rep.ring = ring.name();
  rep.n = n;
  for (std::size_t i = 0; i < g.order(); ++i) {
    Isometry phi = g.element(i);
    std::vector<Vector> vs = cartan_dieudonne(phi);
    ++rep.isometries;
    rep.longest = std::max(rep.longest, vs.size());
    if (vs.size() > 2 * n) rep.result.fail("element " + std::to_string(i) + " needs " + std::to_string(vs.size()));
    if (!(compose_reflections(q, vs) == phi)) rep.result.fail("product differs for element " + std::to_string(i));
  }
  return rep;
}

FactorizationReport factor_random_isometries(std::uint64_t p, std::size_t n, std::size_t count, std::uint64_t seed) {
  RingDescriptor ring = RingDescriptor::localized(p);
  QuadraticModule q = QuadraticModule::euclidean(ring, n);
  FactorizationReport rep;
  rep.ring = ring.name();
  rep.n = n;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<std::size_t> length(1, 2 * n);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Vector> factors(length(rng));
    for (Vector& v : factors) {
      // Reflections need q(v) to be a unit of Z_(p).
      for (;;) {
        std::vector<long> x(n);
        long norm = 0;
        for (long& e : x) {
          e = entry(rng);
          norm += e * e;
        }
        if (norm % static_cast<long>(p) != 0) {
          v = make_vector(ring, x);
          break;
        }
      }
    }
    Isometry phi = compose_reflections(q, factors);
    std::vector<Vector> vs = cartan_dieudonne(phi);
    ++rep.isometries;
    rep.longest = std::max(rep.longest, vs.size());
    if (vs.size() > 2 * n) rep.result.fail("isometry " + std::to_string(c) + " needs " + std::to_string(vs.size()));
    if (!(compose_reflections(q, vs) == phi)) rep.result.fail("product differs for isometry " + std::to_string(c));
  }
  return rep;
}

RepresentationSweep representation_equivalence(std::uint32_t p, std::size_t max_rank) {
  RingDescriptor ring = RingDescriptor::finite_field(p);
  RepresentationSweep rep;
  rep.p = p;
  rep.max_rank = max_rank;
  for (std::size_t r = 1; r <= max_rank; ++r) {
    std::vector<long> diag(r, 1);
    for (;;) {
      QuadraticModule q = QuadraticModule::diagonal(ring, diag);
      for (long a = 1; a < static_cast<long>(p); ++a) {
        ++rep.cases;
        bool direct = represents(q, Scalar(ring, a)).found();
        bool isotropic = find_isotropic(orthogonal_sum(q, QuadraticModule::diagonal(ring, {-a}))).found();
        if (direct) ++rep.represented;
        if (direct != isotropic) {
          ++rep.discrepancies;
          std::string form;
          for (long d : diag) form += (form.empty() ? "" : ",") + std::to_string(d);
          rep.result.fail("<" + form + "> and a = " + std::to_string(a));
        }
      }
      std::size_t pos = 0;
      while (pos < r && ++diag[pos] == static_cast<long>(p)) diag[pos++] = 1;
      if (pos == r) break;
    }
  }
  return rep;
}

HenselReport hensel_replay(std::uint64_t p, unsigned precision, std::size_t count, std::uint64_t seed) {
  RingDescriptor ring = RingDescriptor::padic(p, precision);
  RingDescriptor residue = RingDescriptor::finite_field(p);
  HenselReport rep;
  rep.p = p;
  rep.precision = precision;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> entry(0, static_cast<long>(ring.modulus()) - 1);
  while (rep.cases.size() < count) {
    if (++rep.drawn > 1000 * count) throw BudgetError("hensel_replay: too many rejected forms");
    std::size_t rank = rep.cases.size() % 2 == 0 ? 2 : 3;
    std::vector<std::vector<long>> gram(rank, std::vector<long>(rank));
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = i; j < rank; ++j) gram[i][j] = gram[j][i] = entry(rng);
    QuadraticModule q(Matrix::from_rows(ring, gram));
    if (!q.is_nonsingular()) continue;
    QuadraticModule reduced(Matrix::from_rows(residue, gram));
    if (!find_isotropic(reduced).found()) continue;
    HenselCase hc;
    hc.gram = gram;
    IsotropyWitness w = find_isotropic(q);
    if (w.found()) {
      for (const Scalar& x : *w.vector) hc.witness.push_back(static_cast<long>(x.residue_value()));
      hc.verified = evaluate(q, *w.vector).is_zero() && is_primitive(*w.vector);
    }
    if (!hc.verified) rep.result.fail("no verified isotropic vector for form " + std::to_string(rep.cases.size()));
    rep.cases.push_back(std::move(hc));
  }
  return rep;
}

namespace {

ArithmeticInputs uniform_inputs(long v, bool henselian) {
  ArithmeticInputs a;
  a.m_ring = a.m_quotient = a.pythagoras_residue = a.pythagoras_quotient = v;
  a.henselian = henselian;
  a.ring_formally_real = a.residue_formally_real = a.quotient_formally_real = true;
  return a;
}

std::string grid_row(const std::string& theorem, const std::string& label, long n, long v, long r,
                     const mpq_class& surj, const mpq_class* iso) {
  std::string row = theorem + "\t" + label + "\t" + std::to_string(n) + "\t" + std::to_string(v) + "\t" +
                    std::to_string(r) + "\t" + surj.get_str() + "\t" + std::to_string(floor_of(surj));
  row += iso ? "\t" + iso->get_str() + "\t" + std::to_string(floor_of(*iso)) : std::string("\t-\t-");
  return row + "\n";
}

std::string bare(const std::string& label) { return label.substr(1, label.size() - 2); }

}  // namespace

std::string range_grid_tsv() {
  std::string out = "theorem\tcase\tn\tinvariant\tdegree\tsurj_bound\tsurj_up_to\tiso_bound\tiso_up_to\n";
  for (unsigned c = 1; c <= 8; ++c)
    for (long j = 0; j < 8; ++j) {
      RangeInputs in;
      in.n = 5 + 4 * j + c;
      long v = 1 + (j + c) % 4;
      in.case_index = c;
      in.arithmetic = uniform_inputs(v, c <= 4);
      RangeResult r = range_constant(in);
      out += grid_row("constant", bare(r.case_label), in.n, v, 0, r.surjective_bound, &r.isomorphism_bound);
    }
  for (unsigned c = 1; c <= 6; ++c)
    for (long j = 0; j < 6; ++j) {
      RangeInputs in;
      in.n = 7 + 5 * j + c;
      long v = 1 + (j + 2 * c) % 4;
      in.case_index = c;
      in.arithmetic = uniform_inputs(v, c <= 3);
      RangeResult r = range_abelian(in);
      out += grid_row("abelian", bare(r.case_label), in.n, v, 0, r.surjective_bound, &r.isomorphism_bound);
    }
  for (unsigned c = 1; c <= 8; ++c)
    for (long j = 0; j < 8; ++j) {
      RangeInputs in;
      in.n = 10 + 3 * j + 2 * c;
      long v = 1 + (c + j) % 3;
      in.degree = -1 + j % 4;
      in.case_index = c;
      in.arithmetic = uniform_inputs(v, c <= 4);
      RangeResult r = range_polynomial(in);
      out += grid_row("polynomial", bare(r.case_label), in.n, v, in.degree, r.surjective_bound, &r.isomorphism_bound);
    }
  for (long k = 0; k < 4; ++k)
    for (long j = 0; j < 4; ++j) {
      long n = 20 + 7 * j + k, v = 1 + (j + k) % 3, d = 1 + j % 3;
      char item = static_cast<char>('a' + k);
      CorollaryRange c = intro_corollary_range(1, item, n, uniform_inputs(v, false), d);
      out += grid_row("corollary1", std::string(1, item), n, v, d, c.bound, nullptr);
    }
  for (long k = 0; k < 4; ++k)
    for (long j = 0; j < 3; ++j) {
      long n = 25 + 9 * j + k, v = 1 + (j + k) % 3;
      char item = static_cast<char>('a' + k);
      CorollaryRange c = intro_corollary_range(2, item, n, uniform_inputs(v, false));
      out += grid_row("corollary2", std::string(1, item), n, v, 2, c.bound, nullptr);
    }
  for (long j = 0; j < 8; ++j) {
    long n = 8 + 5 * j;
    CorollaryRange c = intro_corollary_range(3, 'a', n, ArithmeticInputs{});
    out += grid_row("corollary3", "-", n, 0, 1, c.bound, nullptr);
  }
  return out;
}

}  // namespace stiefel
