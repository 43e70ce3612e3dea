#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "cliques.hpp"
#include "stiefel/error.hpp"
#include "stiefel/invariants.hpp"
#include "stiefel/stiefel.hpp"

namespace stiefel {
namespace {

bool identity_gram(const QuadraticModule& q) {
  const Matrix& g = q.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!(g.at(i, j) == Scalar(q.ring(), i == j ? 1L : 0L))) return false;
  return true;
}

/// Unit vectors with their orthogonality graph.
struct UnitGraph {
  std::vector<Vector> vertices;
  fp::OrthogonalityGraph graph{0};
};

UnitGraph unit_graph(const QuadraticModule& q) {
  UnitGraph ug;
  const RingDescriptor& ring = q.ring();
  if (ring.kind() == RingKind::FiniteField) {
    fp::Form form = fp::Form::from_module(q);
    fp::VectorTable table = fp::vectors_with_value(form, 1);
    for (std::size_t i = 0; i < table.size(); ++i) ug.vertices.push_back(table.to_vector(i, ring));
    ug.graph = fp::orthogonality_graph(form, table);
    return ug;
  }
  if (ring.kind() == RingKind::Integers) {
    if (!identity_gram(q)) throw DomainError("unit_vectors over Z: only the identity Gram matrix is supported");
    std::size_t n = q.rank();
    for (std::size_t i = 0; i < n; ++i) {
      Vector e = basis_vector(ring, n, i);
      ug.vertices.push_back(e);
      ug.vertices.push_back(-e);
    }
    std::sort(ug.vertices.begin(), ug.vertices.end(), [](const Vector& a, const Vector& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Scalar& x, const Scalar& y) {
        return x.to_rational() < y.to_rational();
      });
    });
    ug.graph = fp::OrthogonalityGraph(ug.vertices.size());
    for (std::size_t i = 0; i < ug.vertices.size(); ++i)
      for (std::size_t j = 0; j < ug.vertices.size(); ++j)
        if (i != j && gram_product(q, ug.vertices[i], ug.vertices[j]).is_zero()) ug.graph.set(i, j);
    return ug;
  }
  throw DomainError("unit_vectors: unsupported ring " + ring.name());
}

StiefelComplex cliques_to_complex(UnitGraph ug, int max_dim, std::size_t budget) {
  if (max_dim < 0) throw DomainError("build_stiefel: max_dim must be non-negative");
  std::size_t v = ug.vertices.size();
  std::vector<std::vector<std::uint32_t>> by_dim(static_cast<std::size_t>(max_dim) + 1);
  std::size_t total = 0;
  std::vector<std::size_t> counts(by_dim.size(), 0);
  bool extends = detail::for_each_clique(ug.graph, detail::all_bits(v), static_cast<std::size_t>(max_dim) + 1,
                                         [&](const std::uint32_t* c, std::size_t size) {
                                           ++counts[size - 1];
                                           if (++total > budget) {
                                             std::string msg = "Stiefel complex exceeds the budget of " +
                                                               std::to_string(budget) + " simplices; counts so far:";
                                             for (std::size_t d = 0; d < counts.size(); ++d)
                                               msg += " dim" + std::to_string(d) + "=" + std::to_string(counts[d]);
                                             throw BudgetError(msg);
                                           }
                                           if (size > 1) by_dim[size - 1].insert(by_dim[size - 1].end(), c, c + size);
                                         });
  StiefelComplex out;
  out.complex = SimplicialComplex(v);
  for (std::size_t d = 1; d < by_dim.size() && !by_dim[d].empty(); ++d)
    out.complex.set_simplices(static_cast<int>(d), std::move(by_dim[d]));
  out.complete = !extends;
  if (extends) out.complex.set_complete_through(max_dim);
  out.vertices = std::move(ug.vertices);
  return out;
}

/// Residues of a vector over F_p.
std::vector<std::uint32_t> residues(const Vector& v) {
  std::vector<std::uint32_t> r;
  for (const Scalar& x : v) r.push_back(static_cast<std::uint32_t>(x.residue_value()));
  return r;
}

}  // namespace

std::vector<Vector> unit_vectors(const QuadraticModule& q) { return unit_graph(q).vertices; }

StiefelComplex build_stiefel(const QuadraticModule& q, int max_dim, std::size_t budget) {
  return cliques_to_complex(unit_graph(q), max_dim, budget);
}

SkeletonPoset build_skeleton_poset(const QuadraticModule& q, int k, std::size_t budget) {
  if (k < 1) throw DomainError("build_skeleton_poset: k must be at least 1");
  StiefelComplex sc = build_stiefel(q, k - 1, budget);
  SkeletonPoset out;
  for (int d = 0; d <= sc.complex.dimension(); ++d)
    for (std::size_t i = 0; i < sc.complex.count(d); ++i) out.frames.push_back(sc.complex.simplex(d, i));
  out.poset = face_poset(sc.complex);
  out.vertices = std::move(sc.vertices);
  return out;
}

SkeletonCheck skeleton_identification_check(const QuadraticModule& q, int k, const HomologyOptions& opts) {
  StiefelComplex sc = build_stiefel(q, k - 1);
  SimplicialComplex skeleton = sc.complex;
  skeleton.set_complete_through(SimplicialComplex::kComplete);
  SkeletonCheck check;
  check.skeleton_profile = reduced_homology(skeleton, std::nullopt, opts);
  check.poset_profile = poset_homology(face_poset(skeleton), opts);
  check.pass = check.skeleton_profile.same_groups(check.poset_profile);
  return check;
}

ConnectivityReport connectivity_report(std::uint32_t p, std::size_t n, int d, std::size_t budget,
                                       const HomologyOptions& opts) {
  if (d < 0) throw DomainError("connectivity_report: degree must be non-negative");
  RingDescriptor ring = RingDescriptor::finite_field(p);
  ConnectivityReport rep;
  rep.p = p;
  rep.n = n;
  rep.max_degree = d;
  StiefelComplex sc = build_stiefel(QuadraticModule::euclidean(ring, n), d + 1, budget);
  for (int k = 0; k <= d + 1; ++k) rep.simplex_counts.push_back(sc.complex.count(k));
  rep.profile = reduced_homology(sc.complex, d, opts);
  InvariantReport inv = compute_invariants(ring);
  rep.m_invariant = inv.m_invariant.value;
  long num = static_cast<long>(n) - static_cast<long>(rep.m_invariant) - 3;
  rep.predicted_connectivity = num >= 0 ? num / 3 : -((-num + 2) / 3);
  if (rep.predicted_connectivity >= 0) {
    rep.asserted_through = static_cast<int>(std::min<long>(d, rep.predicted_connectivity));
    rep.pass = rep.profile.vanishes_through(rep.asserted_through);
  }
  return rep;
}

std::optional<std::string> SemiSimplicialSet::identity_violation() const {
  for (std::size_t p = 2; p < levels(); ++p)
    for (std::size_t s = 0; s < count(p); ++s)
      for (std::size_t j = 1; j <= p; ++j)
        for (std::size_t i = 0; i < j; ++i) {
          std::uint32_t left = faces[p - 1][i][faces[p][j][s]];
          std::uint32_t right = faces[p - 1][j - 1][faces[p][i][s]];
          if (left != right)
            return "d_" + std::to_string(i) + " d_" + std::to_string(j) + " != d_" + std::to_string(j - 1) + " d_" +
                   std::to_string(i) + " on level " + std::to_string(p) + " simplex " + std::to_string(s);
        }
  return std::nullopt;
}

OrderedStiefel build_ordered_stiefel(const QuadraticModule& q, std::size_t max_p, std::size_t budget) {
  UnitGraph ug = unit_graph(q);
  OrderedStiefel out;
  std::size_t v = ug.vertices.size();
  std::size_t words = ug.graph.words();
  auto& levels = out.set.simplices;
  levels.resize(max_p + 1);
  std::size_t total = 0;
  std::vector<std::uint32_t> tuple;
  std::vector<std::vector<std::uint64_t>> cand(max_p + 2, std::vector<std::uint64_t>(words));
  cand[0] = detail::all_bits(v);
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    for (std::size_t w = 0; w < words; ++w)
      for (std::uint64_t bits = cand[depth][w]; bits != 0; bits &= bits - 1) {
        auto x = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
        tuple.push_back(x);
        if (++total > budget) throw BudgetError("ordered Stiefel set exceeds " + std::to_string(budget) + " simplices");
        levels[depth].push_back(tuple);
        if (depth < max_p) {
          for (std::size_t k = 0; k < words; ++k) cand[depth + 1][k] = cand[depth][k] & ug.graph.row(x)[k];
          self(self, depth + 1);
        }
        tuple.pop_back();
      }
  };
  rec(rec, 0);
  // Depth-first output interleaves levels, so each level is sorted afterwards.
  for (auto& level : levels) std::sort(level.begin(), level.end());
  out.set.faces.resize(max_p + 1);
  for (std::size_t p = 1; p <= max_p; ++p) {
    out.set.faces[p].assign(p + 1, std::vector<std::uint32_t>(levels[p].size()));
    for (std::size_t s = 0; s < levels[p].size(); ++s)
      for (std::size_t i = 0; i <= p; ++i) {
        std::vector<std::uint32_t> face = levels[p][s];
        face.erase(face.begin() + static_cast<long>(i));
        auto it = std::lower_bound(levels[p - 1].begin(), levels[p - 1].end(), face);
        if (it == levels[p - 1].end() || *it != face) throw Error("ordered Stiefel set is not closed under faces");
        out.set.faces[p][i][s] = static_cast<std::uint32_t>(it - levels[p - 1].begin());
      }
  }
  out.vertices = std::move(ug.vertices);
  return out;
}

namespace {

/// Form-preserving linear maps F_p^{k} -> (F_p^{dim}, gram), found by testing q(Mx) = x.x for every x.
std::vector<std::vector<std::vector<std::uint32_t>>> hom_set(std::uint32_t p,
                                                             const std::vector<std::vector<std::uint32_t>>& gram,
                                                             std::size_t k, std::size_t budget) {
  std::size_t dim = gram.size();
  double entries = static_cast<double>(dim * k);
  if (std::pow(static_cast<double>(p), entries) > static_cast<double>(budget))
    throw BudgetError("Hom-set enumeration over " + std::to_string(dim * k) + " entries exceeds the budget");
  auto value = [&](const std::vector<std::uint32_t>& y) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) acc += std::uint64_t{gram[i][j]} * y[i] % p * y[j] % p;
    return static_cast<std::uint32_t>(acc % p);
  };
  std::vector<std::vector<std::vector<std::uint32_t>>> out;
  std::vector<std::uint32_t> entry(dim * k, 0);  // column-major: column c occupies [c*dim, (c+1)*dim)
  std::size_t xs = 1;
  for (std::size_t i = 0; i < k; ++i) xs *= p;
  std::vector<std::uint32_t> x(k), y(dim);
  for (;;) {
    bool preserving = true;
    for (std::size_t code = 0; code < xs && preserving; ++code) {
      std::size_t c = code;
      std::uint32_t norm = 0;
      for (std::size_t i = 0; i < k; ++i) {
        x[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
        norm = (norm + x[i] * x[i]) % p;
      }
      for (std::size_t r = 0; r < dim; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < k; ++i) acc += std::uint64_t{entry[i * dim + r]} * x[i];
        y[r] = static_cast<std::uint32_t>(acc % p);
      }
      preserving = value(y) == norm;
    }
    if (preserving) {
      std::vector<std::vector<std::uint32_t>> columns(k);
      for (std::size_t i = 0; i < k; ++i)
        columns[i].assign(entry.begin() + static_cast<long>(i * dim), entry.begin() + static_cast<long>((i + 1) * dim));
      out.push_back(std::move(columns));
    }
    std::size_t pos = 0;
    while (pos < entry.size() && ++entry[pos] == p) entry[pos++] = 0;
    if (pos == entry.size()) break;
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> gram_residues(const QuadraticModule& q) {
  std::vector<std::vector<std::uint32_t>> g(q.rank(), std::vector<std::uint32_t>(q.rank()));
  for (std::size_t i = 0; i < q.rank(); ++i)
    for (std::size_t j = 0; j < q.rank(); ++j) g[i][j] = static_cast<std::uint32_t>(q.gram().at(i, j).residue_value());
  return g;
}

/// Gram matrix of v (+) E^m as residues; v may have rank 0.
std::vector<std::vector<std::uint32_t>> sum_with_euclidean(const std::vector<std::vector<std::uint32_t>>& v,
                                                           std::size_t m) {
  std::size_t a = v.size();
  std::vector<std::vector<std::uint32_t>> g(a + m, std::vector<std::uint32_t>(a + m, 0));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) g[i][j] = v[i][j];
  for (std::size_t i = 0; i < m; ++i) g[a + i][a + i] = 1;
  return g;
}

}  // namespace

WnCertificate wn_identification_check(const QuadraticModule& v, std::size_t n, std::size_t max_p,
                                      std::size_t budget) {
  if (v.ring().kind() != RingKind::FiniteField) throw DomainError("wn_identification_check: F_p only");
  if (n < 1) throw DomainError("wn_identification_check: n must be at least 1");
  auto p = static_cast<std::uint32_t>(v.ring().prime());
  std::vector<std::vector<std::uint32_t>> vg = v.rank() == 0 ? std::vector<std::vector<std::uint32_t>>{} : gram_residues(v);
  auto total_gram = sum_with_euclidean(vg, n);
  std::size_t dim = total_gram.size();
  Matrix g(v.ring(), dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g.at(i, j) = Scalar(v.ring(), static_cast<long>(total_gram[i][j]));
  QuadraticModule total(g);

  WnCertificate cert;
  OrderedStiefel ord = build_ordered_stiefel(total, max_p, budget);
  std::map<std::vector<std::uint32_t>, std::uint32_t> vertex_index;
  for (std::size_t i = 0; i < ord.vertices.size(); ++i)
    vertex_index[residues(ord.vertices[i])] = static_cast<std::uint32_t>(i);

  cert.bijection = true;
  cert.faces_compatible = true;
  // image[p][h]: index in level p of the frame (f(e_1), ..., f(e_{p+1})) for the h-th map.
  std::vector<std::vector<std::vector<std::uint32_t>>> homs_images(max_p + 1);
  std::vector<std::vector<std::uint32_t>> image(max_p + 1);
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> homs(max_p + 1);
  for (std::size_t level = 0; level <= max_p; ++level) {
    homs[level] = hom_set(p, total_gram, level + 1, budget);
    cert.hom_counts.push_back(homs[level].size());
    cert.frame_counts.push_back(ord.set.count(level));
    std::vector<char> hit(ord.set.count(level), 0);
    for (const auto& f : homs[level]) {
      std::vector<std::uint32_t> tuple;
      for (const auto& column : f) {
        auto it = vertex_index.find(column);
        if (it == vertex_index.end()) {
          cert.bijection = false;
          cert.result.fail("bijection: a column of a form-preserving map is not a unit vector");
          break;
        }
        tuple.push_back(it->second);
      }
      if (tuple.size() != f.size()) break;
      const auto& lv = ord.set.simplices[level];
      auto it = std::lower_bound(lv.begin(), lv.end(), tuple);
      if (it == lv.end() || *it != tuple) {
        cert.bijection = false;
        cert.result.fail("bijection: image of a map is not an ordered frame at level " + std::to_string(level));
        break;
      }
      auto idx = static_cast<std::size_t>(it - lv.begin());
      if (hit[idx]) {
        cert.bijection = false;
        cert.result.fail("bijection: two maps share a frame at level " + std::to_string(level));
        break;
      }
      hit[idx] = 1;
      image[level].push_back(static_cast<std::uint32_t>(idx));
    }
    if (cert.bijection && homs[level].size() != ord.set.count(level)) {
      cert.bijection = false;
      cert.result.fail("bijection: " + std::to_string(homs[level].size()) + " maps but " +
                       std::to_string(ord.set.count(level)) + " frames at level " + std::to_string(level));
    }
  }
  if (cert.bijection) {
    for (std::size_t level = 1; level <= max_p && cert.faces_compatible; ++level) {
      // Sorted copy of level-1 maps for lookup of f composed with the i-th coordinate inclusion.
      std::map<std::vector<std::vector<std::uint32_t>>, std::uint32_t> lower;
      for (std::size_t h = 0; h < homs[level - 1].size(); ++h) lower[homs[level - 1][h]] = image[level - 1][h];
      for (std::size_t h = 0; h < homs[level].size() && cert.faces_compatible; ++h)
        for (std::size_t i = 0; i <= level; ++i) {
          auto restricted = homs[level][h];
          restricted.erase(restricted.begin() + static_cast<long>(i));
          auto it = lower.find(restricted);
          if (it == lower.end() || it->second != ord.set.faces[level][i][image[level][h]]) {
            cert.faces_compatible = false;
            cert.result.fail("faces: d_" + std::to_string(i) + " disagrees at level " + std::to_string(level));
            break;
          }
        }
    }
  } else {
    cert.faces_compatible = false;
  }
  auto violation = ord.set.identity_violation();
  cert.identities_hold = !violation;
  if (violation) cert.result.fail("semi-simplicial identity: " + *violation);

  // LS1: the two inclusions of X into A (+) X (+) X differ.
  {
    auto target = sum_with_euclidean(vg, 2);
    auto maps = hom_set(p, target, 1, budget);
    std::vector<std::uint32_t> middle(target.size(), 0), last(target.size(), 0);
    middle[vg.size()] = 1;
    last[vg.size() + 1] = 1;
    bool has_middle = std::find(maps.begin(), maps.end(), std::vector<std::vector<std::uint32_t>>{middle}) != maps.end();
    bool has_last = std::find(maps.begin(), maps.end(), std::vector<std::vector<std::uint32_t>>{last}) != maps.end();
    cert.ls1 = has_middle && has_last && middle != last;
    if (!cert.ls1) cert.result.fail("LS1: the two inclusions are not distinct morphisms");
  }
  // LS2: appending a zero coordinate is injective on Hom(X, A (+) X^{m-1}).
  cert.ls2 = true;
  for (std::size_t m = 1; m <= n && cert.ls2; ++m) {
    auto source = hom_set(p, sum_with_euclidean(vg, m - 1), 1, budget);
    auto target = hom_set(p, sum_with_euclidean(vg, m), 1, budget);
    std::set<std::vector<std::vector<std::uint32_t>>> images;
    for (auto f : source) {
      f[0].push_back(0);
      if (std::find(target.begin(), target.end(), f) == target.end()) cert.ls2 = false;
      images.insert(f);
    }
    if (images.size() != source.size()) cert.ls2 = false;
    if (!cert.ls2) cert.result.fail("LS2: stabilization is not injective at m = " + std::to_string(m));
  }
  return cert;
}

IntegerAutReport integer_aut_check(std::size_t n) {
  if (n < 1 || n > 4) throw DomainError("integer_aut_check: n must be 1..4");
  RingDescriptor z = RingDescriptor::integers();
  QuadraticModule q = QuadraticModule::euclidean(z, n);
  StiefelComplex sc = build_stiefel(q, static_cast<int>(n) - 1);
  const auto& verts = sc.vertices;
  std::size_t v = verts.size();
  IntegerAutReport rep;
  rep.n = n;
  rep.group_order = std::size_t{1} << n;
  for (std::size_t i = 2; i <= n; ++i) rep.group_order *= i;

  auto index_of = [&](const Vector& x) -> std::size_t {
    for (std::size_t i = 0; i < v; ++i)
      if (verts[i] == x) return i;
    return v;
  };
  auto adjacent = [&](std::size_t a, std::size_t b) {
    std::uint32_t e[2] = {static_cast<std::uint32_t>(std::min(a, b)), static_cast<std::uint32_t>(std::max(a, b))};
    return a != b && sc.complex.index_of(1, e).has_value();
  };
  rep.antipodes_hold = true;
  for (std::size_t a = 0; a < v; ++a) {
    std::size_t antipode = index_of(-verts[a]);
    for (std::size_t b = 0; b < v; ++b) {
      bool apart = b != a && !adjacent(a, b);
      if (apart != (b == antipode)) rep.antipodes_hold = false;
    }
  }

  std::vector<std::uint32_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0U);
  std::set<std::vector<std::uint32_t>> automorphisms;
  std::vector<std::uint32_t> image;
  do {
    bool ok = true;
    for (int d = 1; d <= sc.complex.dimension() && ok; ++d) {
      auto w = static_cast<std::size_t>(d + 1);
      const auto& flat = sc.complex.flat(d);
      for (std::size_t s = 0; s < flat.size() && ok; s += w) {
        image.assign(w, 0);
        for (std::size_t k = 0; k < w; ++k) image[k] = perm[flat[s + k]];
        std::sort(image.begin(), image.end());
        ok = sc.complex.index_of(d, image.data()).has_value();
      }
    }
    if (ok) automorphisms.insert(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  rep.automorphisms = automorphisms.size();

  // Lift: the matrix whose i-th column is the image of e_i must be a signed
  // permutation matrix acting on every vertex as the automorphism does.
  rep.all_lift = true;
  std::set<std::vector<long>> lifts;
  for (const auto& a : automorphisms) {
    Matrix m(z, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector& col = verts[a[index_of(basis_vector(z, n, i))]];
      for (std::size_t r = 0; r < n; ++r) m.at(r, i) = col[r];
    }
    bool signed_perm = true;
    std::vector<long> key;
    for (std::size_t r = 0; r < n; ++r) {
      int nonzero = 0;
      for (std::size_t c = 0; c < n; ++c) {
        long e = m.at(r, c).to_rational().get_num().get_si();
        key.push_back(e);
        if (e != 0) ++nonzero;
        if (e != 0 && e != 1 && e != -1) signed_perm = false;
      }
      if (nonzero != 1) signed_perm = false;
    }
    bool acts = true;
    for (std::size_t x = 0; x < v; ++x)
      if (!(m.apply(verts[x]) == verts[a[x]])) acts = false;
    if (!signed_perm || !acts) rep.all_lift = false;
    lifts.insert(key);
  }
  rep.injective = lifts.size() == automorphisms.size();
  if (!rep.antipodes_hold) rep.result.fail("antipode: some vertex has a non-neighbour other than its negative");
  if (!rep.all_lift) rep.result.fail("lift: an automorphism is not induced by a signed permutation matrix");
  if (!rep.injective) rep.result.fail("lift: two automorphisms share a matrix");
  if (rep.automorphisms != rep.group_order)
    rep.result.fail("count: " + std::to_string(rep.automorphisms) + " automorphisms, expected " +
                    std::to_string(rep.group_order));
  return rep;
}

}  // namespace stiefel
