#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "cliques.hpp"
#include "stiefel/error.hpp"
#include "stiefel/profile.hpp"
#include "stiefel/stability.hpp"
#include "stiefel/stiefel.hpp"

namespace stiefel {
namespace {

using FrameIdx = std::vector<std::uint32_t>;  // sorted indices into the unit-vector table

/// Unit vectors of E^n over F_p, their orthogonality graph, and the vectors orthogonal to U and V.
struct Ambient {
  std::uint32_t p = 0;
  std::size_t n = 0;
  fp::VectorTable units{0};
  fp::OrthogonalityGraph graph{0};
  std::vector<std::uint64_t> complement;
  std::size_t complement_size = 0;
};

std::vector<std::uint32_t> residues_of(const std::vector<long>& v, const fp::Field& field, std::size_t n) {
  if (v.size() != n)
    throw DomainError("frame vector has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
  std::vector<std::uint32_t> out;
  for (long x : v) out.push_back(field.from_long(x));
  return out;
}

Ambient make_ambient(std::uint32_t p, std::size_t n, const std::vector<std::vector<long>>& u_frame,
                     const std::vector<std::vector<long>>& v_frame) {
  fp::Field field(p);
  fp::Form form = fp::Form::euclidean(field, n);
  Ambient a;
  a.p = p;
  a.n = n;
  a.units = fp::vectors_with_value(form, 1);
  a.graph = fp::orthogonality_graph(form, a.units);
  a.complement = detail::all_bits(a.units.size());
  auto absorb = [&](const std::vector<std::vector<long>>& frame, const char* name) {
    std::vector<std::vector<std::uint32_t>> vs;
    for (const auto& v : frame) vs.push_back(residues_of(v, field, n));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (form.value(vs[i].data()) != 1)
        throw DomainError(std::string(name) + ": vector " + std::to_string(i) + " is not a unit vector");
      for (std::size_t j = 0; j < i; ++j)
        if (form.gram_product(vs[i].data(), vs[j].data()) != 0)
          throw DomainError(std::string(name) + ": vectors " + std::to_string(j) + " and " + std::to_string(i) +
                            " are not orthogonal");
    }
    for (std::size_t x = 0; x < a.units.size(); ++x)
      for (const auto& v : vs)
        if (form.gram_product(a.units[x], v.data()) != 0) a.complement[x / 64] &= ~(std::uint64_t{1} << (x % 64));
  };
  absorb(u_frame, "U");
  absorb(v_frame, "V");
  for (std::uint64_t w : a.complement) a.complement_size += static_cast<std::size_t>(__builtin_popcountll(w));
  return a;
}

/// Clique complex on the allowed vertices through dimension max_dim, vertices renumbered in increasing order.
SimplicialComplex clique_skeleton(const fp::OrthogonalityGraph& g, const std::vector<std::uint64_t>& allowed,
                                  int max_dim, std::size_t budget, std::vector<std::size_t>* counts) {
  std::vector<std::uint32_t> rename(g.size(), 0);
  std::uint32_t next = 0;
  for (std::size_t x = 0; x < g.size(); ++x)
    if ((allowed[x / 64] >> (x % 64)) & 1U) rename[x] = next++;
  SimplicialComplex k(next);
  if (max_dim < 0) {
    if (counts) counts->clear();
    return SimplicialComplex(0);
  }
  std::vector<std::vector<std::uint32_t>> by_dim(static_cast<std::size_t>(max_dim) + 1);
  std::vector<std::size_t> seen(by_dim.size(), 0);
  std::size_t total = 0;
  detail::for_each_clique(g, allowed, by_dim.size(), [&](const std::uint32_t* c, std::size_t size) {
    ++seen[size - 1];
    if (++total > budget) throw BudgetError("clique complex exceeds the budget of " + std::to_string(budget) + " simplices");
    if (size > 1)
      for (std::size_t i = 0; i < size; ++i) by_dim[size - 1].push_back(rename[c[i]]);
  });
  for (std::size_t d = 1; d < by_dim.size() && !by_dim[d].empty(); ++d)
    k.set_simplices(static_cast<int>(d), std::move(by_dim[d]));
  if (counts) *counts = seen;
  return k;
}

/// Classification of frames of X = X_l(C) around the pivot u; W = C cap u^perp.
struct Filtration {
  std::size_t l = 0;
  std::uint32_t u = 0;
  std::uint32_t minus_u = 0;
  std::vector<char> in_w;

  bool is_pivot(std::uint32_t x) const { return x == u || x == minus_u; }

  /// 0 for the base, otherwise the layer index.
  std::size_t level(const std::uint32_t* f, std::size_t size) const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < size; ++i) {
      if (is_pivot(f[i])) return 0;
      if (in_w[f[i]]) ++t;
    }
    if (t == size && size == l) return 1;
    if (t >= 1) return 0;
    return size == 1 ? 1 : size;
  }
  std::size_t level(const FrameIdx& f) const { return level(f.data(), f.size()); }

  /// Keeps the pivot and the vectors of W.
  FrameIdx deform(const FrameIdx& f) const {
    FrameIdx out;
    for (std::uint32_t x : f)
      if (is_pivot(x) || in_w[x]) out.push_back(x);
    return out;
  }

  /// Membership in the suspension of X_{l-1}(W) by the pivot pair.
  bool in_suspension(const FrameIdx& f) const {
    bool pivot = false;
    std::size_t t = 0;
    for (std::uint32_t x : f) {
      if (is_pivot(x)) pivot = true;
      else if (in_w[x]) ++t;
    }
    if (pivot) return t + 1 == f.size();
    return t == f.size() && t >= 1 && t <= l - 1;
  }
};

std::string frame_string(const Ambient& a, const FrameIdx& f) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out << ' ';
    out << '(';
    for (std::size_t c = 0; c < a.n; ++c) out << (c ? "," : "") << a.units[f[i]][c];
    out << ')';
  }
  out << ']';
  return out.str();
}

bool subset_of(const FrameIdx& small, const FrameIdx& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Poset on `elements` ordered by inclusion; every relation is listed, so no closure pass is needed.
Poset inclusion_poset(const std::vector<FrameIdx>& elements) {
  std::map<FrameIdx, std::uint32_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], static_cast<std::uint32_t>(i));
  Poset poset(elements.size());
  FrameIdx sub;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const FrameIdx& e = elements[i];
    std::size_t k = e.size();
    if (k > 20) throw DomainError("inclusion_poset: frames longer than 20 are not supported");
    for (std::uint32_t mask = 1; mask + 1 < (1U << k); ++mask) {
      sub.clear();
      for (std::size_t b = 0; b < k; ++b)
        if ((mask >> b) & 1U) sub.push_back(e[b]);
      auto it = index.find(sub);
      if (it != index.end()) poset.add_relation(it->second, static_cast<std::uint32_t>(i));
    }
  }
  poset.close(Poset::Closure::AlreadyTransitive);
  return poset;
}

/// Link of f in X restricted to levels <= max_level: proper subframes first, then superframes.
struct LocalLink {
  std::vector<FrameIdx> elements;
  std::vector<std::uint32_t> lower, upper;
  Poset poset;
};

LocalLink local_link(const Ambient& a, const Filtration& fl, const FrameIdx& f, std::size_t max_level) {
  LocalLink link;
  std::size_t k = f.size();
  for (std::uint32_t mask = 1; mask + 1 < (1U << k); ++mask) {
    FrameIdx sub;
    for (std::size_t b = 0; b < k; ++b)
      if ((mask >> b) & 1U) sub.push_back(f[b]);
    if (fl.level(sub) <= max_level) {
      link.lower.push_back(static_cast<std::uint32_t>(link.elements.size()));
      link.elements.push_back(std::move(sub));
    }
  }
  if (k < fl.l) {
    std::vector<std::uint64_t> allowed = a.complement;
    for (std::uint32_t x : f)
      for (std::size_t w = 0; w < allowed.size(); ++w) allowed[w] &= a.graph.row(x)[w];
    FrameIdx merged;
    detail::for_each_clique(a.graph, allowed, fl.l - k, [&](const std::uint32_t* c, std::size_t size) {
      merged.clear();
      std::merge(f.begin(), f.end(), c, c + size, std::back_inserter(merged));
      if (fl.level(merged) <= max_level) {
        link.upper.push_back(static_cast<std::uint32_t>(link.elements.size()));
        link.elements.push_back(merged);
      }
    });
  }
  link.poset = inclusion_poset(link.elements);
  return link;
}

/// Algorithm R reservoir; keeps everything when capacity is unbounded.
struct Reservoir {
  std::size_t capacity = 0;
  std::size_t seen = 0;
  std::vector<FrameIdx> items;

  void offer(const std::uint32_t* f, std::size_t size, std::mt19937_64& rng) {
    ++seen;
    if (items.size() < capacity) {
      items.emplace_back(f, f + size);
      return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, seen - 1);
    std::size_t j = pick(rng);
    if (j < capacity) items[j].assign(f, f + size);
  }
};

HomologyProfile suspension_of(const HomologyProfile& h) {
  HomologyProfile s;
  s.max_degree = h.max_degree + 1;
  s.betti.push_back(0);
  s.torsion.emplace_back();
  s.betti.insert(s.betti.end(), h.betti.begin(), h.betti.end());
  s.torsion.insert(s.torsion.end(), h.torsion.begin(), h.torsion.end());
  return s;
}

/// Profiles compared degree by degree, missing degrees read as zero.
bool same_homology(const HomologyProfile& a, const HomologyProfile& b) {
  int top = std::max(a.max_degree, b.max_degree);
  for (int i = -1; i <= top; ++i)
    if (a.betti_at(i) != b.betti_at(i) || a.torsion_at(i) != b.torsion_at(i)) return false;
  return true;
}

}  // namespace

IntersectionProfile intersection_profile(std::uint32_t p, std::size_t n, std::size_t l,
                                         const std::vector<std::vector<long>>& u_frame,
                                         const std::vector<std::vector<long>>& v_frame, std::size_t budget,
                                         const HomologyOptions& opts) {
  if (l < 1) throw DomainError("intersection_profile: l must be at least 1");
  Ambient a = make_ambient(p, n, u_frame, v_frame);
  IntersectionProfile out;
  out.unit_vectors = a.complement_size;
  SimplicialComplex k = clique_skeleton(a.graph, a.complement, static_cast<int>(l) - 1, budget, &out.simplex_counts);
  out.profile = reduced_homology(k, std::nullopt, opts);
  return out;
}

MorseReplayReport morse_replay(std::uint32_t p, std::size_t n, std::size_t l,
                               const std::vector<std::vector<long>>& u_frame,
                               const std::vector<std::vector<long>>& v_frame, const MorseReplayOptions& opts) {
  if (l < 1) throw DomainError("morse_replay: l must be at least 1");
  if (u_frame.size() < v_frame.size()) throw DomainError("morse_replay: U must be at least as long as V");
  Ambient a = make_ambient(p, n, u_frame, v_frame);
  MorseReplayReport rep;
  rep.p = p;
  rep.n = n;
  rep.l = l;
  rep.r = u_frame.size();
  rep.s = v_frame.size();
  ArithmeticInputs arithmetic = ArithmeticInputs::from_profile(ArithmeticProfile::for_ring(RingDescriptor::finite_field(p)));
  for (const IntersectionCase& c : intersection_cases(arithmetic, static_cast<long>(n), static_cast<long>(l),
                                                      static_cast<long>(rep.r), static_cast<long>(rep.s)))
    if (c.satisfied) rep.conditions_met.push_back(c.case_label);
  if (rep.conditions_met.empty() && !opts.force)
    throw DomainError("morse_replay: no numbered condition holds for (n, l, r, s) = (" + std::to_string(n) + ", " +
                      std::to_string(l) + ", " + std::to_string(rep.r) + ", " + std::to_string(rep.s) + ")");
  rep.unit_vectors_in_complement = a.complement_size;
  if (a.complement_size == 0) throw DomainError("morse_replay: no unit vector is orthogonal to U and V");

  // Pivot: first unit vector in canonical order orthogonal to U and V.
  Filtration fl;
  fl.l = l;
  for (std::size_t w = 0; w < a.complement.size(); ++w)
    if (a.complement[w]) {
      fl.u = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(a.complement[w])));
      break;
    }
  fp::Field field(p);
  std::vector<std::uint32_t> neg(n);
  for (std::size_t c = 0; c < n; ++c) neg[c] = field.neg(a.units[fl.u][c]);
  fl.minus_u = static_cast<std::uint32_t>(*a.units.find_sorted(neg.data()));
  rep.pivot.assign(a.units[fl.u], a.units[fl.u] + n);
  fl.in_w.assign(a.units.size(), 0);
  std::vector<std::uint64_t> w_bits(a.complement.size());
  for (std::size_t w = 0; w < w_bits.size(); ++w) w_bits[w] = a.complement[w] & a.graph.row(fl.u)[w];
  for (std::size_t x = 0; x < a.units.size(); ++x)
    if ((w_bits[x / 64] >> (x % 64)) & 1U) {
      fl.in_w[x] = 1;
      ++rep.w_vectors;
    }

  // Pass 1: part sizes.
  std::vector<std::size_t> counts(l + 1, 0);
  std::size_t total = 0;
  detail::for_each_clique(a.graph, a.complement, l, [&](const std::uint32_t* c, std::size_t size) {
    if (++total > opts.stream_budget)
      throw BudgetError("morse_replay: more than " + std::to_string(opts.stream_budget) + " frames");
    ++counts[fl.level(c, size)];
  });
  rep.exhaustive = total <= opts.exhaustive_limit;

  // Pass 2: seed-fixed samples per part (everything when exhaustive).
  std::size_t capacity = rep.exhaustive || opts.sample_per_layer == 0 ? std::numeric_limits<std::size_t>::max()
                                                                       : opts.sample_per_layer;
  std::vector<Reservoir> parts(l + 1);
  for (auto& part : parts) part.capacity = capacity;
  std::mt19937_64 rng(opts.seed);
  detail::for_each_clique(a.graph, a.complement, l, [&](const std::uint32_t* c, std::size_t size) {
    parts[fl.level(c, size)].offer(c, size, rng);
  });
  rep.base_size = counts[0];
  rep.base_checked = parts[0].items.size();
  for (std::size_t i = 1; i <= l; ++i) rep.layers.push_back({counts[i], parts[i].items.size()});

  // Base: the deformation onto the suspension is monotone, decreasing and fixes its image.
  for (const FrameIdx& x : parts[0].items) {
    if (!rep.result.pass) break;
    FrameIdx fx = fl.deform(x);
    if (!subset_of(fx, x) || !fl.in_suspension(fx) || fl.level(fx) != 0) {
      rep.result.fail("base deformation: image of " + frame_string(a, x) + " leaves the suspension");
      break;
    }
    if (fl.in_suspension(x) && fx != x) {
      rep.result.fail("base deformation: moves " + frame_string(a, x) + " inside the suspension");
      break;
    }
    std::size_t k = x.size();
    for (std::uint32_t mask = 1; mask + 1 < (1U << k); ++mask) {
      FrameIdx y;
      for (std::size_t b = 0; b < k; ++b)
        if ((mask >> b) & 1U) y.push_back(x[b]);
      if (fl.level(y) == 0 && !subset_of(fl.deform(y), fx)) {
        rep.result.fail("base deformation: not monotone on " + frame_string(a, y) + " < " + frame_string(a, x));
        break;
      }
    }
  }

  // The suspension of X_{l-1}(W) must be a wedge of (l-1)-spheres.
  SimplicialComplex w_complex = clique_skeleton(a.graph, w_bits, static_cast<int>(l) - 2, kSimplexBudget, nullptr);
  rep.w_profile = reduced_homology(w_complex, std::nullopt, opts.homology);
  if (!rep.w_profile.is_wedge_of_spheres(static_cast<int>(l) - 2))
    rep.result.fail("base: X_{l-1}(W) has " + rep.w_profile.to_string() + ", not a wedge of " +
                    std::to_string(static_cast<long>(l) - 2) + "-spheres");

  // Layers: equal-length parts, and links below each element are wedges of (l-2)-spheres.
  for (std::size_t i = 1; i <= l && rep.result.pass; ++i)
    for (const FrameIdx& f : parts[i].items) {
      bool shape = i == 1 ? (f.size() == 1 && !fl.in_w[f[0]] && !fl.is_pivot(f[0])) ||
                                (f.size() == l && fl.deform(f) == f)
                          : f.size() == i;
      if (!shape) {
        rep.result.fail("(ii): " + frame_string(a, f) + " has the wrong shape for L_" + std::to_string(i));
        break;
      }
      LocalLink link = local_link(a, fl, f, i - 1);
      HomologyProfile h = poset_homology(link.poset, opts.homology);
      if (!h.is_wedge_of_spheres(static_cast<int>(l) - 2)) {
        rep.result.fail("(iii): link of " + frame_string(a, f) + " in L_" + std::to_string(i) + " has " +
                        h.to_string());
        break;
      }
      if (i >= 2) {
        JoinCertificate join = poset_join_check(link.poset, link.lower, link.upper, opts.homology);
        ++rep.joins_checked;
        if (!join.result.pass) {
          rep.result.fail("(iii) join: link of " + frame_string(a, f) + ": " + join.result.failure);
          break;
        }
      }
    }

  if (!rep.exhaustive || !rep.result.pass) return rep;

  // Exhaustive: the whole poset through the generic lemma check, plus the deformation and suspension directly.
  std::vector<FrameIdx> frames;
  MorseDecomposition dec;
  dec.layers.resize(l);
  for (std::size_t i = 0; i <= l; ++i)
    for (const FrameIdx& f : parts[i].items) {
      auto idx = static_cast<std::uint32_t>(frames.size());
      frames.push_back(f);
      if (i == 0) dec.base.push_back(idx);
      else dec.layers[i - 1].push_back(idx);
    }
  Poset whole = inclusion_poset(frames);
  MorseOptions mo;
  mo.homology = opts.homology;
  MorseCertificate cert = morse_lemma_check(whole, dec, static_cast<int>(l) - 1, mo);
  rep.direct = cert.direct;
  if (!cert.result.pass) {
    rep.result.fail("morse lemma: " + cert.result.failure);
    return rep;
  }
  if (!rep.direct) {
    rep.result.fail("morse lemma: direct cross-check did not fit its budget");
    return rep;
  }

  // Base elements in increasing index order, so position = index in the induced poset.
  std::map<FrameIdx, std::uint32_t> base_index;
  for (std::size_t j = 0; j < dec.base.size(); ++j) base_index.emplace(frames[dec.base[j]], static_cast<std::uint32_t>(j));
  std::vector<std::uint32_t> f_map;
  std::vector<std::uint32_t> suspension;
  for (std::size_t j = 0; j < dec.base.size(); ++j) {
    const FrameIdx& x = frames[dec.base[j]];
    f_map.push_back(base_index.at(fl.deform(x)));
    if (fl.in_suspension(x)) suspension.push_back(static_cast<std::uint32_t>(j));
  }
  Poset base = whole.induced(dec.base);
  DeformationCertificate def = closure_deformation_check(base, f_map, opts.homology);
  if (!def.result.pass) {
    rep.result.fail("base deformation: " + def.result.failure);
    return rep;
  }
  HomologyProfile susp = poset_homology(base.induced(suspension), opts.homology);
  if (!same_homology(susp, suspension_of(rep.w_profile)))
    rep.result.fail("suspension: " + susp.to_string() + " is not the suspension of " + rep.w_profile.to_string());
  return rep;
}

}  // namespace stiefel
