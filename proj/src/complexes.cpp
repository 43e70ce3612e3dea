#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "stiefel/complexes.hpp"
#include "stiefel/error.hpp"

namespace stiefel {
namespace {

bool tuples_sorted_unique(const std::vector<std::uint32_t>& flat, std::size_t width) {
  for (std::size_t i = width; i < flat.size(); i += width)
    if (!std::lexicographical_compare(flat.begin() + static_cast<long>(i - width),
                                      flat.begin() + static_cast<long>(i), flat.begin() + static_cast<long>(i),
                                      flat.begin() + static_cast<long>(i + width)))
      return false;
  return true;
}

std::vector<std::uint32_t> sort_tuples(const std::vector<std::uint32_t>& flat, std::size_t width) {
  std::size_t n = flat.size() / width;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(flat.begin() + static_cast<long>(a * width),
                                        flat.begin() + static_cast<long>((a + 1) * width),
                                        flat.begin() + static_cast<long>(b * width),
                                        flat.begin() + static_cast<long>((b + 1) * width));
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<std::uint32_t> out;
  out.reserve(flat.size());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order[k];
    if (k > 0 && !less(order[k - 1], i)) continue;
    out.insert(out.end(), flat.begin() + static_cast<long>(i * width),
               flat.begin() + static_cast<long>((i + 1) * width));
  }
  return out;
}

std::string describe(const std::vector<std::uint32_t>& xs) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < xs.size() && i < 16; ++i) out << (i ? "," : "") << xs[i];
  if (xs.size() > 16) out << ",... (" << xs.size() << " total)";
  out << '}';
  return out.str();
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t vertex_count) : vertex_count_(vertex_count) {
  if (vertex_count > 0) {
    simplices_.emplace_back(vertex_count);
    std::iota(simplices_[0].begin(), simplices_[0].end(), 0U);
  }
}

SimplicialComplex SimplicialComplex::from_facets(std::size_t vertex_count, const std::vector<Simplex>& facets) {
  SimplicialComplex k(vertex_count);
  std::vector<std::vector<std::uint32_t>> by_dim;
  for (Simplex f : facets) {
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw DomainError("facet with a repeated vertex");
    if (f.empty()) continue;
    if (f.back() >= vertex_count) throw DomainError("facet vertex out of range");
    if (f.size() > 24) throw BudgetError("facet too large for face enumeration");
    std::uint32_t full = (1U << f.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      auto width = static_cast<std::size_t>(__builtin_popcount(mask));
      if (width < 2) continue;
      if (by_dim.size() < width) by_dim.resize(width);
      for (std::size_t b = 0; b < f.size(); ++b)
        if (mask >> b & 1U) by_dim[width - 1].push_back(f[b]);
    }
  }
  for (std::size_t dim = 1; dim < by_dim.size(); ++dim) k.set_simplices(static_cast<int>(dim), by_dim[dim]);
  return k;
}

std::size_t SimplicialComplex::count(int dim) const {
  if (dim < 0 || dim > dimension()) return 0;
  return simplices_[static_cast<std::size_t>(dim)].size() / static_cast<std::size_t>(dim + 1);
}

std::size_t SimplicialComplex::total() const {
  std::size_t t = 0;
  for (int d = 0; d <= dimension(); ++d) t += count(d);
  return t;
}

const std::vector<std::uint32_t>& SimplicialComplex::flat(int dim) const {
  static const std::vector<std::uint32_t> none;
  if (dim < 0 || dim > dimension()) return none;
  return simplices_[static_cast<std::size_t>(dim)];
}

Simplex SimplicialComplex::simplex(int dim, std::size_t i) const {
  const auto& f = flat(dim);
  auto w = static_cast<std::size_t>(dim + 1);
  return Simplex(f.begin() + static_cast<long>(i * w), f.begin() + static_cast<long>((i + 1) * w));
}

std::optional<std::size_t> SimplicialComplex::index_of(int dim, const std::uint32_t* vertices) const {
  if (dim == 0) {
    if (vertices[0] < vertex_count_) return vertices[0];
    return std::nullopt;
  }
  const auto& f = flat(dim);
  auto w = static_cast<std::size_t>(dim + 1);
  std::size_t lo = 0, hi = f.size() / w;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const std::uint32_t* s = f.data() + mid * w;
    if (std::lexicographical_compare(s, s + w, vertices, vertices + w))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < f.size() / w && std::equal(vertices, vertices + w, f.data() + lo * w)) return lo;
  return std::nullopt;
}

void SimplicialComplex::set_simplices(int dim, std::vector<std::uint32_t> flat) {
  if (dim < 1) throw DomainError("set_simplices: dimension must be at least 1");
  if (dim > dimension() + 1) throw DomainError("set_simplices: would leave an empty intermediate dimension");
  auto w = static_cast<std::size_t>(dim + 1);
  if (flat.size() % w != 0) throw DomainError("set_simplices: length is not a multiple of the width");
  for (std::size_t i = 0; i < flat.size(); i += w)
    for (std::size_t j = 0; j < w; ++j) {
      if (flat[i + j] >= vertex_count_) throw DomainError("set_simplices: vertex out of range");
      if (j > 0 && flat[i + j - 1] >= flat[i + j]) throw DomainError("set_simplices: vertices not increasing");
    }
  if (!tuples_sorted_unique(flat, w)) flat = sort_tuples(flat, w);
  if (static_cast<std::size_t>(dim) == simplices_.size()) simplices_.emplace_back();
  simplices_[static_cast<std::size_t>(dim)] = std::move(flat);
  while (simplices_.size() > 1 && simplices_.back().empty()) simplices_.pop_back();
}

bool SimplicialComplex::is_downward_closed() const {
  std::vector<std::uint32_t> face;
  for (int dim = 1; dim <= dimension(); ++dim) {
    auto w = static_cast<std::size_t>(dim + 1);
    const auto& f = flat(dim);
    face.resize(w - 1);
    for (std::size_t i = 0; i < f.size(); i += w)
      for (std::size_t skip = 0; skip < w; ++skip) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < w; ++j)
          if (j != skip) face[k++] = f[i + j];
        if (!index_of(dim - 1, face.data())) return false;
      }
  }
  return true;
}

SimplicialComplex SimplicialComplex::skeleton(int dim) const {
  SimplicialComplex k(vertex_count_);
  for (int d = 1; d <= std::min(dim, dimension()); ++d) k.set_simplices(d, flat(d));
  k.complete_through_ = dim >= dimension() ? complete_through_ : std::min(complete_through_, dim);
  return k;
}

Poset::Poset(std::size_t size) : above_(size), below_(size) {}

void Poset::add_relation(std::uint32_t smaller, std::uint32_t larger) {
  if (smaller >= size() || larger >= size()) throw DomainError("poset relation out of range");
  if (smaller == larger) throw DomainError("poset relation is reflexive at " + std::to_string(smaller));
  above_[smaller].push_back(larger);
  closed_ = false;
}

void Poset::close(Closure mode) {
  std::size_t n = size();
  if (mode == Closure::Compute) {
    std::vector<std::vector<std::uint32_t>> closure(n);
    std::vector<std::uint32_t> mark(n, UINT32_MAX), stack;
    for (std::uint32_t a = 0; a < n; ++a) {
      stack.assign(above_[a].begin(), above_[a].end());
      while (!stack.empty()) {
        std::uint32_t b = stack.back();
        stack.pop_back();
        if (mark[b] == a) continue;
        mark[b] = a;
        if (b == a) throw DomainError("poset relation has a cycle through " + std::to_string(a));
        closure[a].push_back(b);
        for (std::uint32_t c : above_[b])
          if (mark[c] != a) stack.push_back(c);
      }
    }
    above_ = std::move(closure);
  }
  for (auto& up : above_) {
    std::sort(up.begin(), up.end());
    up.erase(std::unique(up.begin(), up.end()), up.end());
  }
  for (auto& down : below_) down.clear();
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b : above_[a]) {
      if (b == a) throw DomainError("poset relation is reflexive at " + std::to_string(a));
      below_[b].push_back(a);
    }
  closed_ = true;
  if (mode == Closure::AlreadyTransitive)
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b : above_[a])
        if (less(b, a))
          throw DomainError("poset relation has a cycle through " + std::to_string(a) + " and " + std::to_string(b));
}

bool Poset::less(std::uint32_t a, std::uint32_t b) const {
  return std::binary_search(above_[a].begin(), above_[a].end(), b);
}

std::size_t Poset::relation_count() const {
  std::size_t r = 0;
  for (const auto& up : above_) r += up.size();
  return r;
}

Poset Poset::induced(const std::vector<std::uint32_t>& elements) const {
  Poset sub(elements.size());
  for (std::uint32_t i = 0; i < elements.size(); ++i)
    for (std::uint32_t b : above_[elements[i]]) {
      auto it = std::lower_bound(elements.begin(), elements.end(), b);
      if (it != elements.end() && *it == b) sub.above_[i].push_back(static_cast<std::uint32_t>(it - elements.begin()));
    }
  sub.close(Closure::AlreadyTransitive);
  return sub;
}

std::vector<std::uint32_t> Poset::link(std::uint32_t x) const {
  std::vector<std::uint32_t> out;
  std::merge(below_[x].begin(), below_[x].end(), above_[x].begin(), above_[x].end(), std::back_inserter(out));
  return out;
}

Poset face_poset(const SimplicialComplex& k) {
  std::vector<std::size_t> offset(static_cast<std::size_t>(k.dimension() + 2), 0);
  for (int d = 0; d <= k.dimension(); ++d)
    offset[static_cast<std::size_t>(d + 1)] = offset[static_cast<std::size_t>(d)] + k.count(d);
  Poset p(offset.back());
  std::vector<std::uint32_t> face;
  for (int d = 1; d <= k.dimension(); ++d) {
    auto w = static_cast<std::size_t>(d + 1);
    for (std::size_t i = 0; i < k.count(d); ++i) {
      const std::uint32_t* s = k.flat(d).data() + i * w;
      auto self = static_cast<std::uint32_t>(offset[static_cast<std::size_t>(d)] + i);
      for (std::uint32_t mask = 1; mask + 1 < (1U << w); ++mask) {
        face.clear();
        for (std::size_t b = 0; b < w; ++b)
          if (mask >> b & 1U) face.push_back(s[b]);
        int fd = static_cast<int>(face.size()) - 1;
        auto idx = k.index_of(fd, face.data());
        if (!idx) throw DomainError("face_poset: complex is not downward closed");
        p.add_relation(static_cast<std::uint32_t>(offset[static_cast<std::size_t>(fd)] + *idx), self);
      }
    }
  }
  p.close(Poset::Closure::AlreadyTransitive);
  return p;
}

SimplicialComplex order_complex(const Poset& p, std::size_t cap) {
  SimplicialComplex k(p.size());
  std::vector<std::vector<std::uint32_t>> by_dim(1);
  std::size_t chains = p.size();
  if (chains > cap) throw BudgetError("order complex exceeds " + std::to_string(cap) + " chains");
  std::vector<std::uint32_t> chain, sorted;
  std::function<void(std::uint32_t)> extend = [&](std::uint32_t top) {
    for (std::uint32_t next : p.above(top)) {
      chain.push_back(next);
      if (++chains > cap) throw BudgetError("order complex exceeds " + std::to_string(cap) + " chains");
      sorted = chain;
      std::sort(sorted.begin(), sorted.end());
      if (by_dim.size() < chain.size()) by_dim.resize(chain.size());
      auto& out = by_dim[chain.size() - 1];
      out.insert(out.end(), sorted.begin(), sorted.end());
      extend(next);
      chain.pop_back();
    }
  };
  for (std::uint32_t a = 0; a < p.size(); ++a) {
    chain.assign(1, a);
    extend(a);
  }
  for (std::size_t d = 1; d < by_dim.size(); ++d) k.set_simplices(static_cast<int>(d), std::move(by_dim[d]));
  return k;
}

DeformationCertificate closure_deformation_check(const Poset& p, const std::vector<std::uint32_t>& f,
                                                 const HomologyOptions& opts) {
  DeformationCertificate cert;
  if (f.size() != p.size()) {
    cert.result.fail("hypothesis: map has " + std::to_string(f.size()) + " values for " +
                     std::to_string(p.size()) + " elements");
    return cert;
  }
  auto leq = [&](std::uint32_t a, std::uint32_t b) { return a == b || p.less(a, b); };
  for (std::uint32_t x = 0; x < p.size() && cert.result.pass; ++x) {
    if (f[x] >= p.size()) {
      cert.result.fail("hypothesis: f(" + std::to_string(x) + ") out of range");
      break;
    }
    if (!leq(f[x], x)) cert.result.fail("hypothesis: f(x) <= x fails at x = " + std::to_string(x));
    for (std::uint32_t y : p.above(x))
      if (cert.result.pass && !leq(f[x], f[y]))
        cert.result.fail("hypothesis: not monotone on " + std::to_string(x) + " < " + std::to_string(y));
  }
  if (!cert.result.pass) return cert;
  cert.image = f;
  std::sort(cert.image.begin(), cert.image.end());
  cert.image.erase(std::unique(cert.image.begin(), cert.image.end()), cert.image.end());
  cert.whole = poset_homology(p, opts);
  cert.image_profile = poset_homology(p.induced(cert.image), opts);
  if (!cert.whole.same_groups(cert.image_profile))
    cert.result.fail("conclusion: |P| has " + cert.whole.to_string() + " but |f(P)| has " +
                     cert.image_profile.to_string());
  return cert;
}

std::vector<long> join_betti(const HomologyProfile& a, const HomologyProfile& b) {
  std::vector<long> out(static_cast<std::size_t>(a.max_degree + b.max_degree + 3), 0);
  for (int i = -1; i <= a.max_degree; ++i)
    for (int j = -1; j <= b.max_degree; ++j)
      out[static_cast<std::size_t>(i + j + 2)] += a.betti_at(i) * b.betti_at(j);
  return out;
}

JoinCertificate poset_join_check(const Poset& p, const std::vector<std::uint32_t>& lower,
                                 const std::vector<std::uint32_t>& upper, const HomologyOptions& opts) {
  JoinCertificate cert;
  std::vector<char> side(p.size(), 0);
  for (std::uint32_t y : lower) {
    if (y >= p.size() || side[y]) {
      cert.result.fail("hypothesis: lower part repeats or leaves P at " + std::to_string(y));
      return cert;
    }
    side[y] = 1;
  }
  for (std::uint32_t z : upper) {
    if (z >= p.size() || side[z]) {
      cert.result.fail("hypothesis: parts overlap or leave P at " + std::to_string(z));
      return cert;
    }
    side[z] = 2;
  }
  for (std::uint32_t x = 0; x < p.size(); ++x)
    if (!side[x]) {
      cert.result.fail("hypothesis: element " + std::to_string(x) + " lies in neither part");
      return cert;
    }
  for (std::uint32_t y : lower)
    for (std::uint32_t z : upper)
      if (!p.less(y, z)) {
        cert.result.fail("hypothesis: " + std::to_string(y) + " < " + std::to_string(z) + " fails");
        return cert;
      }
  std::vector<std::uint32_t> ys = lower, zs = upper;
  std::sort(ys.begin(), ys.end());
  std::sort(zs.begin(), zs.end());
  cert.lower = poset_homology(p.induced(ys), opts);
  cert.upper = poset_homology(p.induced(zs), opts);
  cert.whole = poset_homology(p, opts);
  cert.predicted_betti = join_betti(cert.lower, cert.upper);
  std::vector<long> actual = cert.whole.betti;
  std::size_t len = std::max(actual.size(), cert.predicted_betti.size());
  actual.resize(len, 0);
  std::vector<long> predicted = cert.predicted_betti;
  predicted.resize(len, 0);
  if (actual != predicted)
    cert.result.fail("conclusion: Betti numbers of |P| (" + cert.whole.to_string() +
                     ") differ from the join prediction");
  cert.integral_checked = cert.lower.torsion_free() && cert.upper.torsion_free();
  if (cert.integral_checked && !cert.whole.torsion_free())
    cert.result.fail("conclusion: torsion in |P| although both factors are torsion-free");
  return cert;
}

MorseCertificate morse_lemma_check(const Poset& x, const MorseDecomposition& dec, int d, const MorseOptions& opts) {
  MorseCertificate cert;
  constexpr std::uint32_t kNone = UINT32_MAX;
  // level[e]: 0 for the base, i for the first layer L_i containing e.
  std::vector<std::uint32_t> level(x.size(), kNone);
  for (std::uint32_t e : dec.base) {
    if (e >= x.size()) throw DomainError("morse decomposition: base element out of range");
    level[e] = 0;
  }
  for (std::size_t i = 0; i < dec.layers.size(); ++i)
    for (std::uint32_t e : dec.layers[i]) {
      if (e >= x.size()) throw DomainError("morse decomposition: layer element out of range");
      level[e] = std::min(level[e], static_cast<std::uint32_t>(i + 1));
    }
  for (std::uint32_t e = 0; e < x.size(); ++e)
    if (level[e] == kNone) {
      cert.result.fail("cover: element " + std::to_string(e) + " lies in no part");
      return cert;
    }

  // (i)
  std::vector<std::uint32_t> base = dec.base;
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  cert.base_profile = poset_homology(x.induced(base), opts.homology);
  if (!cert.base_profile.is_wedge_of_spheres(d))
    cert.result.fail("(i): base has " + cert.base_profile.to_string() + ", not a wedge of " + std::to_string(d) +
                     "-spheres");

  // (ii)
  for (std::size_t i = 0; i < dec.layers.size() && cert.result.pass; ++i) {
    std::vector<char> in_layer(x.size(), 0);
    for (std::uint32_t e : dec.layers[i]) in_layer[e] = 1;
    for (std::uint32_t e : dec.layers[i])
      for (std::uint32_t f : x.above(e))
        if (in_layer[f] && cert.result.pass)
          cert.result.fail("(ii): " + std::to_string(e) + " < " + std::to_string(f) + " inside L_" +
                           std::to_string(i + 1));
  }

  // (iii)
  std::mt19937_64 rng(opts.seed);
  bool exhaustive = true;
  for (std::size_t i = 0; i < dec.layers.size(); ++i) {
    std::vector<std::uint32_t> chosen = dec.layers[i];
    LayerReport report{chosen.size(), chosen.size()};
    if (opts.sample_per_layer > 0 && chosen.size() > opts.sample_per_layer) {
      std::vector<std::uint32_t> picked;
      std::sample(chosen.begin(), chosen.end(), std::back_inserter(picked), opts.sample_per_layer, rng);
      chosen = std::move(picked);
      report.checked = chosen.size();
      exhaustive = false;
    }
    cert.layers.push_back(report);
    if (!cert.result.pass) continue;
    for (std::uint32_t e : chosen) {
      std::vector<std::uint32_t> lk;
      for (std::uint32_t f : x.link(e))
        if (level[f] <= i) lk.push_back(f);
      HomologyProfile h = poset_homology(x.induced(lk), opts.homology);
      if (!h.is_wedge_of_spheres(d - 1)) {
        cert.result.fail("(iii): link of " + std::to_string(e) + " in L_" + std::to_string(i + 1) + " has " +
                         h.to_string() + " (link elements " + describe(lk) + ")");
        break;
      }
    }
  }
  cert.fully_verified = exhaustive && cert.result.pass;
  if (!cert.fully_verified) return cert;
  try {
    SimplicialComplex whole = order_complex(x, opts.direct_budget);
    cert.direct = reduced_homology(whole, std::nullopt, opts.homology);
  } catch (const BudgetError&) {
    return cert;
  }
  if (!cert.direct->is_wedge_of_spheres(d))
    cert.result.fail("conclusion: |X| has " + cert.direct->to_string() + ", not a wedge of " +
                     std::to_string(d) + "-spheres");
  return cert;
}

}  // namespace stiefel
