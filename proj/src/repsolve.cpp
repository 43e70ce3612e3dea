#include "stiefel/repsolve.hpp"

#include <numeric>
#include <sstream>

#include "small_vectors.hpp"
#include "stiefel/fp.hpp"

namespace stiefel {
namespace {

using i128 = __int128;

void require_supported(const RingDescriptor& ring, const char* what) {
  if (ring.kind() == RingKind::Integers) throw DomainError(std::string(what) + " does not support Z");
}

// Orthogonal sum of blocks plus the first coordinate of each block.
struct BlockSum {
  QuadraticModule sum;
  std::vector<std::size_t> starts;
};

BlockSum sum_blocks(const std::vector<QuadraticModule>& blocks) {
  if (blocks.empty()) throw DomainError("transversal_zero needs at least one block");
  BlockSum out{blocks.front(), {0}};
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    out.starts.push_back(out.sum.rank());
    out.sum = orthogonal_sum(out.sum, blocks[i]);
  }
  return out;
}

std::size_t block_end(const BlockSum& b, std::size_t i) {
  return i + 1 < b.starts.size() ? b.starts[i + 1] : b.sum.rank();
}

Vector from_residues(const RingDescriptor& ring, const std::uint32_t* x, std::size_t n) {
  Vector v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(ring, static_cast<long>(x[i]));
  return v;
}

// First x in lexicographic order with q(x) == target and accept(x). The zero
// vector is skipped.
template <class Accept>
std::optional<std::vector<std::uint32_t>> ff_first(const fp::Form& form, std::uint32_t target, Accept&& accept) {
  const std::size_t n = form.dim();
  std::optional<std::vector<std::uint32_t>> found;
  std::vector<std::uint32_t> x(n);
  fp::sweep(form, [&](const std::uint32_t* soa, std::size_t stride, std::size_t count, const std::uint32_t* values,
                      std::uint64_t first) {
    for (std::size_t i = 0; i < count; ++i) {
      if (values[i] != target || first + i == 0) continue;
      for (std::size_t j = 0; j < n; ++j) x[j] = soa[j * stride + i];
      if (accept(x)) {
        found = x;
        return true;
      }
    }
    return false;
  });
  return found;
}

std::uint32_t ff_block_value(const fp::Form& form, const std::vector<std::uint32_t>& x, std::size_t lo,
                             std::size_t hi) {
  const std::uint32_t p = form.field().p();
  const auto& g = form.gram();
  const std::size_t n = form.dim();
  std::uint64_t acc = 0;
  for (std::size_t j = lo; j < hi; ++j)
    for (std::size_t k = lo; k < hi; ++k) acc = (acc + std::uint64_t{g[j * n + k]} * x[j] % p * x[k]) % p;
  return static_cast<std::uint32_t>(acc);
}

bool ff_blocks_are_units(const fp::Form& form, const BlockSum& b, const std::vector<bool>& unit_mask,
                         const std::vector<std::uint32_t>& x) {
  for (std::size_t i = 0; i < b.starts.size(); ++i)
    if (unit_mask[i] && ff_block_value(form, x, b.starts[i], block_end(b, i)) == 0) return false;
  return true;
}

// Index j with B(x, e_j) a unit, i.e. (G x)_j != 0 mod p.
std::optional<std::size_t> unit_polar_direction(const fp::Form& form, const std::vector<std::uint32_t>& x) {
  std::vector<std::uint32_t> gx(form.dim());
  form.times_gram(x.data(), gx.data());
  for (std::size_t j = 0; j < gx.size(); ++j)
    if (gx[j] != 0) return j;
  return std::nullopt;
}

// Lift x (exact mod p) to a solution of q(x + lambda e_j) = target mod p^N
// with lambda in the maximal ideal.
Vector hensel_lift_along(const QuadraticModule& q, const Vector& x, std::size_t j, const Scalar& target) {
  const RingDescriptor& ring = q.ring();
  const Vector e = basis_vector(ring, q.rank(), j);
  const std::vector<Scalar> coeffs{evaluate(q, x) - target, polar(q, x, e), evaluate(q, e)};
  const Scalar lambda = hensel_root(coeffs, Scalar::zero(ring));
  Vector out = x + lambda * e;
  if (!(evaluate(q, out) == target)) throw Error("Hensel lift failed to reach the target value");
  return out;
}

// Integer presentation D * q for the bounded searches over Q and Z_(p).
struct IntegerForm {
  std::size_t n = 0;
  std::vector<long> gram;  // D * G, entries below 2^40 in absolute value
  mpz_class scale;         // D

  explicit IntegerForm(const QuadraticModule& q) : n(q.rank()), gram(n * n), scale(1) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const mpz_class den = q.gram().at(i, j).to_rational().get_den();
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
      }
    static const mpz_class limit = mpz_class(1) << 40;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const mpq_class scaled = q.gram().at(i, j).to_rational() * scale;
        const mpz_class num = scaled.get_num();
        if (abs(num) >= limit) throw DomainError("Gram entries too large for the bounded integer search");
        gram[i * n + j] = num.get_si();
      }
  }

  i128 value(const std::vector<long>& x, std::size_t lo, std::size_t hi) const {
    i128 acc = 0;
    for (std::size_t j = lo; j < hi; ++j) {
      if (x[j] == 0) continue;
      i128 row = 0;
      for (std::size_t k = lo; k < hi; ++k) row += static_cast<i128>(gram[j * n + k]) * x[k];
      acc += row * x[j];
    }
    return acc;
  }
};

bool divisible(i128 v, std::uint64_t p) { return v % static_cast<i128>(p) == 0; }

// First integer vector in increasing max-norm, lexicographic within a norm,
// with D*q(x) == 0 and a unit value on every masked block.
std::optional<std::vector<long>> bounded_search(const BlockSum& b, const std::vector<bool>& unit_mask,
                                                const RingDescriptor& ring, long height) {
  const IntegerForm form(b.sum);
  const std::uint64_t p = ring.kind() == RingKind::LocalizedAtP ? ring.prime() : 0;
  if (p != 0 && mpz_divisible_ui_p(form.scale.get_mpz_t(), p)) throw Error("denominator divisible by p in Z_(p)");
  if (height > (1L << 20)) throw DomainError("height bound too large");
  std::optional<std::vector<long>> found;
  detail::for_each_small_vector(b.sum.rank(), height, [&](const std::vector<long>& x) {
    i128 total = 0;
    for (std::size_t i = 0; i < b.starts.size(); ++i) {
      const i128 v = form.value(x, b.starts[i], block_end(b, i));
      if (unit_mask[i] && (v == 0 || (p != 0 && divisible(v, p)))) return false;
      total += v;
    }
    if (total != 0) return false;
    found = x;
    return true;
  });
  return found;
}

Vector rational_vector(const std::vector<long>& x) {
  const RingDescriptor q = RingDescriptor::rationals();
  Vector v;
  v.reserve(x.size());
  for (long c : x) v.emplace_back(q, c);
  return v;
}

Vector convert(const Vector& x, const RingDescriptor& ring) {
  Vector v;
  v.reserve(x.size());
  for (const Scalar& c : x) v.push_back(Scalar::from_rational(ring, c.to_rational()));
  return v;
}

// Splits a solution (y, t) of q (+) <-a> into y / t.
Vector divide_last(const Vector& yt) {
  Vector y(yt.begin(), yt.end() - 1);
  const Scalar t_inv = yt.back().inverse();
  return t_inv * y;
}

Representation not_found(const RingDescriptor& ring, const SearchOptions& options) {
  Representation r;
  if (ring.is_finite()) {
    r.regime = SearchRegime::Exhaustive;
    r.precision = ring.precision();
  } else {
    r.regime = SearchRegime::NotFoundWithinBound;
    r.height_bound = options.height_bound;
  }
  return r;
}

SearchRegime found_regime(const RingDescriptor& ring) {
  switch (ring.kind()) {
    case RingKind::FiniteField: return SearchRegime::Exhaustive;
    case RingKind::PadicTruncated: return SearchRegime::HenselLifted;
    case RingKind::LocalizedAtP: return SearchRegime::RescaledFromQuotientField;
    default: return SearchRegime::BoundedSearch;
  }
}

// Core of transversal_zero and find_value: a zero of the block sum whose
// masked blocks take unit values. Hypotheses are checked by the callers.
Representation masked_zero(const BlockSum& b, const std::vector<bool>& unit_mask, const SearchOptions& options) {
  const RingDescriptor& ring = b.sum.ring();
  Representation out = not_found(ring, options);
  switch (ring.kind()) {
    case RingKind::FiniteField: {
      const fp::Form form = fp::Form::from_module(b.sum);
      auto x = ff_first(form, 0, [&](const auto& c) { return ff_blocks_are_units(form, b, unit_mask, c); });
      if (x) out.vector = from_residues(ring, x->data(), x->size());
      break;
    }
    case RingKind::PadicTruncated: {
      const fp::Form form = fp::Form::from_module(reduce_mod_p(b.sum));
      std::size_t direction = 0;
      auto x = ff_first(form, 0, [&](const auto& c) {
        if (!ff_blocks_are_units(form, b, unit_mask, c)) return false;
        auto j = unit_polar_direction(form, c);
        if (j) direction = *j;
        return j.has_value();
      });
      if (x) out.vector = hensel_lift_along(b.sum, from_residues(ring, x->data(), x->size()), direction,
                                            Scalar::zero(ring));
      break;
    }
    case RingKind::Rationals:
    case RingKind::LocalizedAtP: {
      auto x = bounded_search(b, unit_mask, ring, options.height_bound);
      if (x) out.vector = convert(rational_vector(*x), ring);
      break;
    }
    case RingKind::Integers: throw DomainError("integer rings are not supported by the solvers");
  }
  if (out.vector) {
    out.regime = found_regime(ring);
    out.height_bound = ring.is_finite() ? 0 : options.height_bound;
  }
  return out;
}

bool equals_identity(const Matrix& m) { return m == Matrix::identity(m.ring(), m.rows()); }

}  // namespace

const char* regime_name(SearchRegime regime) {
  switch (regime) {
    case SearchRegime::Exhaustive: return "exhaustive";
    case SearchRegime::HenselLifted: return "hensel-lifted";
    case SearchRegime::RescaledFromQuotientField: return "rescaled-from-quotient-field";
    case SearchRegime::BoundedSearch: return "bounded-search";
    case SearchRegime::NotFoundWithinBound: return "not-found-within-bound";
  }
  return "?";
}

Vector scale_to_primitive(const Vector& x, const RingDescriptor& target) {
  if (target.kind() != RingKind::LocalizedAtP && target.kind() != RingKind::PadicTruncated)
    throw DomainError("scale_to_primitive targets Z_(p) or Z/p^N");
  if (is_zero(x)) throw DomainError("scale_to_primitive of the zero vector");
  const std::uint64_t p = target.prime();
  const RingDescriptor rationals = RingDescriptor::rationals();
  std::size_t best = x.size();
  Valuation best_v = Valuation::infinite();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Valuation v = valuation(Scalar::from_rational(rationals, x[i].to_rational()), p);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const mpq_class pivot = x[best].to_rational();
  Vector out;
  out.reserve(x.size());
  for (const Scalar& c : x) out.push_back(Scalar::from_rational(target, c.to_rational() / pivot));
  return out;
}

IsotropyWitness find_isotropic(const QuadraticModule& q, const SearchOptions& options) {
  const RingDescriptor& ring = q.ring();
  require_supported(ring, "find_isotropic");
  if (!q.is_nonsingular()) throw DomainError("find_isotropic needs a non-singular module");
  IsotropyWitness out;
  out.precision = ring.kind() == RingKind::PadicTruncated ? ring.precision() : 0;
  if (q.rank() == 0) return out;
  switch (ring.kind()) {
    case RingKind::FiniteField: {
      const fp::Form form = fp::Form::from_module(q);
      auto x = ff_first(form, 0, [](const auto&) { return true; });
      if (x) out.vector = normalize_direction(from_residues(ring, x->data(), x->size()));
      out.regime = SearchRegime::Exhaustive;
      return out;
    }
    case RingKind::PadicTruncated: {
      const fp::Field field(static_cast<std::uint32_t>(ring.prime()));
      const fp::Form form = fp::Form::from_module(reduce_mod_p(q));
      out.regime = SearchRegime::Exhaustive;
      auto u_bar = ff_first(form, 0, [](const auto&) { return true; });
      if (!u_bar) return out;
      // Hyperbolic pair mod p: B(u, w) = 1 with w a multiple of e_j, then v = w - q(w) u.
      const std::size_t j = *unit_polar_direction(form, *u_bar);
      std::vector<std::uint32_t> gu(form.dim());
      form.times_gram(u_bar->data(), gu.data());
      std::vector<std::uint32_t> w(form.dim(), 0);
      w[j] = field.inv(field.mul(2, gu[j]));
      const std::uint32_t qw = form.value(w.data());
      std::vector<std::uint32_t> v_bar(form.dim());
      for (std::size_t i = 0; i < v_bar.size(); ++i) v_bar[i] = field.sub(w[i], field.mul(qw, (*u_bar)[i]));
      const Vector u = from_residues(ring, u_bar->data(), u_bar->size());
      const Vector v = from_residues(ring, v_bar.data(), v_bar.size());
      const std::vector<Scalar> coeffs{evaluate(q, v), polar(q, u, v), evaluate(q, u)};
      const Scalar lambda = hensel_root(coeffs, Scalar::zero(ring));
      Vector z = lambda * u + v;
      if (!evaluate(q, z).is_zero() || !is_primitive(z)) throw Error("Hensel isotropy lift failed");
      out.vector = normalize_direction(z);
      out.regime = SearchRegime::HenselLifted;
      return out;
    }
    case RingKind::Rationals:
    case RingKind::LocalizedAtP: {
      const BlockSum b{q, {0}};
      auto x = bounded_search(b, {false}, ring, options.height_bound);
      out.height_bound = options.height_bound;
      if (!x) {
        out.regime = SearchRegime::NotFoundWithinBound;
        return out;
      }
      const Vector rational = rational_vector(*x);
      if (ring.kind() == RingKind::Rationals) {
        out.vector = normalize_direction(rational);
        out.regime = SearchRegime::BoundedSearch;
      } else {
        out.vector = scale_to_primitive(rational, ring);
        out.regime = SearchRegime::RescaledFromQuotientField;
      }
      return out;
    }
    case RingKind::Integers: break;
  }
  throw DomainError("find_isotropic: unsupported ring");
}

Representation transversal_zero(const std::vector<QuadraticModule>& blocks, const SearchOptions& options) {
  if (blocks.size() % 2 != 0) throw DomainError("transversal_zero needs an even number of blocks");
  const BlockSum b = sum_blocks(blocks);
  const RingDescriptor& ring = b.sum.ring();
  require_supported(ring, "transversal_zero");
  for (const auto& block : blocks)
    if (!block.is_nonsingular()) throw DomainError("transversal_zero needs non-singular blocks");
  if (ring.is_finite() && !find_isotropic(b.sum, options).found())
    throw DomainError("transversal_zero needs an isotropic module");
  return masked_zero(b, std::vector<bool>(blocks.size(), true), options);
}

Representation represents(const QuadraticModule& q, const Scalar& a, const SearchOptions& options) {
  require_supported(q.ring(), "represents");
  if (!(a.ring() == q.ring())) throw DomainError("represents: ring mismatch");
  if (!a.is_unit()) throw DomainError("represents needs a unit value");
  if (!q.is_nonsingular()) throw DomainError("represents needs a non-singular module");
  const QuadraticModule minus_a = QuadraticModule::diagonal({-a});
  const IsotropyWitness iso = find_isotropic(orthogonal_sum(q, minus_a), options);
  if (!iso.found()) {
    Representation r = not_found(q.ring(), options);
    r.precision = iso.precision;
    return r;
  }
  Representation t = transversal_zero({q, minus_a}, options);
  if (t.vector) t.vector = divide_last(*t.vector);
  return t;
}

Representation find_value(const QuadraticModule& q, const Scalar& a, const SearchOptions& options) {
  require_supported(q.ring(), "find_value");
  if (!(a.ring() == q.ring())) throw DomainError("find_value: ring mismatch");
  if (!a.is_unit()) throw DomainError("find_value needs a unit value");
  if (q.rank() == 0) return not_found(q.ring(), options);
  const BlockSum b{orthogonal_sum(q, QuadraticModule::diagonal({-a})), {0, q.rank()}};
  Representation r = masked_zero(b, {false, true}, options);
  if (r.vector) r.vector = divide_last(*r.vector);
  return r;
}

bool UnitVectorBoundReport::any_condition() const {
  for (int i = 0; i < 4; ++i)
    if (residue_conditions[i] || quotient_conditions[i]) return true;
  return false;
}

std::string UnitVectorBoundReport::describe() const {
  std::ostringstream os;
  os << "n=" << n << " r=" << r << " s=" << s << " residue-criterion:";
  for (int i = 0; i < 4; ++i) os << (residue_conditions[i] ? '1' : '0');
  os << " quotient-criterion:";
  for (int i = 0; i < 4; ++i) os << (quotient_conditions[i] ? '1' : '0');
  os << " found=" << (vector ? "yes" : "no") << " regime=" << regime_name(regime);
  return os.str();
}

UnitVectorBoundReport unit_vector_in_complement(const QuadraticModule& euclidean, const Frame& u, const Frame& v,
                                                const SearchOptions& options) {
  const RingDescriptor& ring = euclidean.ring();
  require_supported(ring, "unit_vector_in_complement");
  if (!equals_identity(euclidean.gram())) throw DomainError("unit_vector_in_complement expects E^n");
  Frame(euclidean, u.vectors());
  Frame(euclidean, v.vectors());

  UnitVectorBoundReport rep;
  rep.n = euclidean.rank();
  rep.r = u.size();
  rep.s = v.size();
  const ArithmeticProfile prof = ArithmeticProfile::for_ring(ring);
  const std::size_t n = rep.n, r = rep.r, s = rep.s;
  if (prof.m_ring) {
    rep.residue_conditions[0] = n >= *prof.m_ring + r + 2 * s;
    rep.residue_conditions[1] = prof.residue_formally_real && n >= *prof.m_ring + r + s;
  }
  if (prof.pythagoras_residue && prof.henselian) {
    rep.residue_conditions[2] = n > 2 * *prof.pythagoras_residue * r + s;
    rep.residue_conditions[3] = prof.residue_formally_real && n > *prof.pythagoras_residue * r + s;
  }
  if (r >= s) {
    if (prof.m_quotient) {
      rep.quotient_conditions[0] = n >= *prof.m_quotient + 2 * r + s;
      rep.quotient_conditions[1] = prof.quotient_formally_real && n >= *prof.m_quotient + r + s;
    }
    if (prof.pythagoras_quotient) {
      rep.quotient_conditions[2] = n > 2 * *prof.pythagoras_quotient * r + s;
      rep.quotient_conditions[3] = prof.quotient_formally_real && n > *prof.pythagoras_quotient * r + s;
    }
  }

  const Scalar one = Scalar::one(ring);
  auto embed = [&](const std::vector<Vector>& basis, const Vector& coords) {
    Vector out = zero_vector(ring, n);
    for (std::size_t i = 0; i < basis.size(); ++i) out = out + coords[i] * basis[i];
    return out;
  };
  auto unit_basis_vector = [&](const std::vector<Vector>& basis) -> std::optional<Vector> {
    for (const Vector& b : basis)
      if (evaluate(euclidean, b).is_one()) return b;
    return std::nullopt;
  };
  if (ring.is_local()) {
    const Submodule core = complement_core(euclidean, u, v);
    if (auto b = unit_basis_vector(core.basis)) {
      rep.vector = b;
      rep.found_in_core = true;
      rep.regime = ring.is_finite() ? SearchRegime::Exhaustive : found_regime(ring);
    } else if (core.rank() > 0) {
      const Representation found = represents(restrict_to(euclidean, core.basis), one, options);
      rep.regime = found.regime;
      if (found.vector) {
        rep.vector = embed(core.basis, *found.vector);
        rep.found_in_core = true;
      }
    }
  }
  if (!rep.vector) {
    std::vector<Vector> both = u.vectors();
    both.insert(both.end(), v.vectors().begin(), v.vectors().end());
    const Submodule inter = orthogonal_to(euclidean, both);
    if (inter.rank() > 0) {
      const Representation found = find_value(restrict_to(euclidean, inter.basis), one, options);
      rep.regime = found.regime;
      if (found.vector) rep.vector = embed(inter.basis, *found.vector);
    }
  }
  if (rep.vector) {
    if (!evaluate(euclidean, *rep.vector).is_one()) throw Error("unit vector search returned a non-unit vector");
    for (const auto& w : u.vectors())
      if (!polar(euclidean, *rep.vector, w).is_zero()) throw Error("unit vector is not orthogonal to U");
    for (const auto& w : v.vectors())
      if (!polar(euclidean, *rep.vector, w).is_zero()) throw Error("unit vector is not orthogonal to V");
  }
  return rep;
}

ArithmeticProfile ArithmeticProfile::for_ring(const RingDescriptor& ring) {
  ArithmeticProfile p{ring, {}, {}, {}, {}, false, false, false};
  switch (ring.kind()) {
    case RingKind::FiniteField:
      p.m_ring = p.pythagoras_residue = p.m_quotient = p.pythagoras_quotient = 2;
      p.henselian = true;
      break;
    case RingKind::PadicTruncated:
      // Read as Z_p: henselian with residue field F_p; Q_p is a local field, so m <= 4.
      p.m_ring = p.pythagoras_residue = 2;
      p.m_quotient = 4;
      p.henselian = true;
      break;
    case RingKind::LocalizedAtP:
      p.m_ring = 4;
      p.pythagoras_residue = 2;
      p.m_quotient = p.pythagoras_quotient = 4;
      p.quotient_formally_real = true;
      break;
    case RingKind::Rationals:
      p.m_ring = p.pythagoras_residue = p.m_quotient = p.pythagoras_quotient = 4;
      p.henselian = true;
      p.residue_formally_real = p.quotient_formally_real = true;
      break;
    case RingKind::Integers: throw DomainError("Z is not a valuation ring");
  }
  return p;
}

std::string ArithmeticProfile::describe() const {
  auto show = [](const std::optional<unsigned>& v) { return v ? std::to_string(*v) : std::string("?"); };
  std::ostringstream os;
  os << ring.name() << ": m_A=" << show(m_ring) << " P(k)=" << show(pythagoras_residue)
     << " m_K=" << show(m_quotient) << " P(K)=" << show(pythagoras_quotient)
     << " henselian=" << henselian << " k_real=" << residue_formally_real << " K_real=" << quotient_formally_real;
  return os.str();
}

}  // namespace stiefel
