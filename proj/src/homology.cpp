#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <tuple>
#include <sstream>
#include <utility>

#include "stiefel/complexes.hpp"
#include "stiefel/error.hpp"

namespace stiefel {
namespace {

struct Overflow {};

// Checked arithmetic: long long throws Overflow, mpz_class never does.
inline void sub_mul(long long& x, long long q, long long y) {
  long long t;
  if (__builtin_mul_overflow(q, y, &t) || __builtin_sub_overflow(x, t, &x)) throw Overflow{};
}
inline void sub_mul(mpz_class& x, const mpz_class& q, const mpz_class& y) { x -= q * y; }
inline void add_to(long long& x, long long y) {
  if (__builtin_add_overflow(x, y, &x)) throw Overflow{};
}
inline void add_to(mpz_class& x, const mpz_class& y) { x += y; }
inline void negate(long long& x) {
  if (x == std::numeric_limits<long long>::min()) throw Overflow{};
  x = -x;
}
inline void negate(mpz_class& x) { x = -x; }
inline long long magnitude(long long x) { return x < 0 ? -x : x; }
inline mpz_class magnitude(const mpz_class& x) { return abs(x); }
inline bool is_zero(long long x) { return x == 0; }
inline bool is_zero(const mpz_class& x) { return x == 0; }
inline mpz_class to_mpz(long long x) { return mpz_class(std::to_string(x)); }
inline mpz_class to_mpz(const mpz_class& x) { return x; }

template <class T>
using Dense = std::vector<std::vector<T>>;

template <class T>
Dense<T> identity_of(std::size_t n) {
  Dense<T> id(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = T(1);
  return id;
}

/**
 * Diagonalizes `a` in place by unimodular row and column operations, recording
 * them in u (rows) and v (columns) when present. With `chain` the diagonal
 * also satisfies d_1 | d_2 | ...; otherwise only zeros off the diagonal are
 * guaranteed. Returns the nonzero diagonal entries, made positive.
 */
template <class T>
std::vector<T> diagonalize_in_place(Dense<T>& a, std::size_t rows, std::size_t cols, Dense<T>* u, Dense<T>* v,
                                    bool chain) {
  std::vector<T> diagonal;
  auto row_sub = [&](std::size_t i, std::size_t t, const T& q, std::size_t from) {
    for (std::size_t j = from; j < cols; ++j)
      if (!is_zero(a[t][j])) sub_mul(a[i][j], q, a[t][j]);
    if (u)
      for (std::size_t j = 0; j < rows; ++j)
        if (!is_zero((*u)[t][j])) sub_mul((*u)[i][j], q, (*u)[t][j]);
  };
  auto col_sub = [&](std::size_t j, std::size_t t, const T& q, std::size_t from) {
    for (std::size_t i = from; i < rows; ++i)
      if (!is_zero(a[i][t])) sub_mul(a[i][j], q, a[i][t]);
    if (v)
      for (std::size_t i = 0; i < cols; ++i)
        if (!is_zero((*v)[i][t])) sub_mul((*v)[i][j], q, (*v)[i][t]);
  };
  auto swap_rows = [&](std::size_t i, std::size_t k) {
    std::swap(a[i], a[k]);
    if (u) std::swap((*u)[i], (*u)[k]);
  };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][j], a[i][k]);
    if (v)
      for (std::size_t i = 0; i < cols; ++i) std::swap((*v)[i][j], (*v)[i][k]);
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Pivot: smallest magnitude in the trailing block, stopping at a unit.
    std::size_t pi = rows, pj = cols;
    T best(0);
    for (std::size_t i = t; i < rows && !(pi < rows && magnitude(best) == 1); ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (is_zero(a[i][j])) continue;
        if (pi == rows || magnitude(a[i][j]) < magnitude(best)) {
          best = a[i][j];
          pi = i;
          pj = j;
          if (magnitude(best) == 1) break;
        }
      }
    if (pi == rows) break;
    if (pi != t) swap_rows(pi, t);
    if (pj != t) swap_cols(pj, t);

    for (;;) {
      bool moved = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (is_zero(a[i][t])) continue;
        T q = a[i][t] / a[t][t];
        if (!is_zero(q)) row_sub(i, t, q, t);
        if (!is_zero(a[i][t])) {
          swap_rows(i, t);
          moved = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (is_zero(a[t][j])) continue;
        T q = a[t][j] / a[t][t];
        if (!is_zero(q)) col_sub(j, t, q, t);
        if (!is_zero(a[t][j])) {
          swap_cols(j, t);
          moved = true;
        }
      }
      if (moved) continue;
      bool clear = true;
      for (std::size_t i = t + 1; i < rows && clear; ++i) clear = is_zero(a[i][t]);
      for (std::size_t j = t + 1; j < cols && clear; ++j) clear = is_zero(a[t][j]);
      if (!clear) continue;
      if (!chain) break;
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!is_zero(a[i][j] % a[t][t])) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      // Row t += row bad brings a non-multiple into row t.
      for (std::size_t j = t; j < cols; ++j) add_to(a[t][j], a[bad][j]);
      if (u)
        for (std::size_t j = 0; j < rows; ++j) add_to((*u)[t][j], (*u)[bad][j]);
    }
    if (a[t][t] < 0) {
      for (std::size_t j = t; j < cols; ++j) negate(a[t][j]);
      if (u)
        for (std::size_t j = 0; j < rows; ++j) negate((*u)[t][j]);
    }
    diagonal.push_back(a[t][t]);
  }
  return diagonal;
}

/// Rearranges positive integers into a divisibility chain with the same quotient group.
std::vector<mpz_class> divisibility_chain(std::vector<mpz_class> d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[j] % d[i] == 0) continue;
      mpz_class g = gcd(d[i], d[j]);
      mpz_class l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  return d;
}

struct Reduction {
  std::size_t rank = 0;
  std::vector<mpz_class> torsion;  // invariant factors > 1 of the cokernel
};

template <class T>
Reduction dense_reduction(Dense<T> a, std::size_t rows, std::size_t cols) {
  auto diag = diagonalize_in_place<T>(a, rows, cols, nullptr, nullptr, false);
  std::vector<mpz_class> d;
  for (const auto& x : diag) d.push_back(to_mpz(x));
  Reduction r;
  r.rank = d.size();
  for (auto& x : divisibility_chain(std::move(d)))
    if (x > 1) r.torsion.push_back(x);
  return r;
}

Reduction dense_reduction_any(const Dense<long long>& a, std::size_t rows, std::size_t cols) {
  try {
    return dense_reduction<long long>(a, rows, cols);
  } catch (const Overflow&) {
    Dense<mpz_class> big(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) big[i][j] = to_mpz(a[i][j]);
    return dense_reduction<mpz_class>(std::move(big), rows, cols);
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0U); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

std::size_t component_count(const SimplicialComplex& k) {
  UnionFind uf(k.vertex_count());
  std::size_t components = k.vertex_count();
  const auto& edges = k.flat(1);
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2)
    if (uf.unite(edges[i], edges[i + 1])) --components;
  return components;
}

using SparseColumn = std::vector<std::pair<std::uint32_t, long long>>;

// x := alpha x + beta y (both sorted by row), dropping zeros.
SparseColumn combine(long long alpha, const SparseColumn& x, long long beta, const SparseColumn& y) {
  SparseColumn out;
  out.reserve(x.size() + y.size());
  auto scaled = [](long long c, long long e) {
    long long r;
    if (__builtin_mul_overflow(c, e, &r)) throw BudgetError("sparse elimination: entry overflow");
    return r;
  };
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      if (alpha != 0) out.emplace_back(x[i].first, scaled(alpha, x[i].second));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      if (beta != 0) out.emplace_back(y[j].first, scaled(beta, y[j].second));
      ++j;
    } else {
      long long s;
      if (__builtin_add_overflow(scaled(alpha, x[i].second), scaled(beta, y[j].second), &s))
        throw BudgetError("sparse elimination: entry overflow");
      if (s != 0) out.emplace_back(x[i].first, s);
      ++i;
      ++j;
    }
  }
  return out;
}

long long ext_gcd(long long a, long long b, long long& s, long long& t) {
  long long old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    long long q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, cur_s) = std::make_pair(cur_s, old_s - q * cur_s);
    std::tie(old_t, cur_t) = std::make_pair(cur_t, old_t - q * cur_t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

/**
 * Column echelon form over Z by unimodular column operations, one column at a
 * time keyed on the lowest nonzero row. The retained pivot columns span the
 * image lattice; when every pivot entry is +-1 that lattice is a direct summand.
 */
class SparseEchelon {
 public:
  explicit SparseEchelon(std::size_t rows) : rows_(rows), pivot_of_row_(rows, -1) {}

  void add(SparseColumn c) {
    while (!c.empty()) {
      auto [row, b] = c.back();
      int p = pivot_of_row_[row];
      if (p < 0) {
        pivot_of_row_[row] = static_cast<int>(pivots_.size());
        pivots_.push_back(std::move(c));
        return;
      }
      SparseColumn& pc = pivots_[static_cast<std::size_t>(p)];
      long long a = pc.back().second;
      if (b % a == 0) {
        c = combine(1, c, -(b / a), pc);
      } else {
        long long s, t;
        long long g = ext_gcd(a, b, s, t);
        SparseColumn fresh = combine(s, pc, t, c);
        c = combine(a / g, c, -(b / g), pc);
        pc = std::move(fresh);
      }
    }
  }

  std::size_t rank() const { return pivots_.size(); }

  Reduction finish() const {
    Reduction r;
    r.rank = pivots_.size();
    bool unit = std::all_of(pivots_.begin(), pivots_.end(),
                            [](const SparseColumn& c) { return c.back().second == 1 || c.back().second == -1; });
    if (unit) return r;
    // Cokernel is unchanged after clearing unit-pivot rows from the other
    // columns and dropping those rows with their unit columns; unit columns
    // only reach rows below their own pivot, so clearing from the top terminates.
    auto is_unit_row = [&](std::uint32_t row) {
      int p = pivot_of_row_[row];
      if (p < 0) return false;
      long long v = pivots_[static_cast<std::size_t>(p)].back().second;
      return v == 1 || v == -1;
    };
    std::vector<SparseColumn> rest;
    for (const auto& c : pivots_) {
      long long low = c.back().second;
      if (low == 1 || low == -1) continue;
      SparseColumn d = c;
      std::uint32_t bound = std::numeric_limits<std::uint32_t>::max();
      for (;;) {
        auto it = std::find_if(d.rbegin(), d.rend(), [&](const auto& e) { return e.first < bound && is_unit_row(e.first); });
        if (it == d.rend()) break;
        auto [row, value] = *it;
        const SparseColumn& unit = pivots_[static_cast<std::size_t>(pivot_of_row_[row])];
        d = combine(1, d, -value * unit.back().second, unit);
        bound = row;
      }
      rest.push_back(std::move(d));
    }
    std::vector<std::uint32_t> used;
    for (const auto& c : rest)
      for (const auto& [row, value] : c) used.push_back(row);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    if (used.size() * rest.size() > (std::size_t{1} << 24))
      throw BudgetError("torsion resolution needs a " + std::to_string(used.size()) + " x " +
                        std::to_string(rest.size()) + " dense reduction");
    Dense<long long> m(used.size(), std::vector<long long>(rest.size(), 0));
    for (std::size_t j = 0; j < rest.size(); ++j)
      for (const auto& [row, value] : rest[j]) {
        auto i = static_cast<std::size_t>(std::lower_bound(used.begin(), used.end(), row) - used.begin());
        m[i][j] = value;
      }
    Reduction d = dense_reduction_any(m, used.size(), rest.size());
    r.torsion = std::move(d.torsion);
    return r;
  }

 private:
  std::size_t rows_;
  std::vector<int> pivot_of_row_;
  std::vector<SparseColumn> pivots_;
};

/// Boundary column of the i-th dim-simplex: sum of (-1)^j times the j-th face.
SparseColumn boundary_column(const SimplicialComplex& k, int dim, std::size_t i) {
  const auto& flat = k.flat(dim);
  const std::uint32_t* s = flat.data() + i * static_cast<std::size_t>(dim + 1);
  SparseColumn col;
  std::vector<std::uint32_t> face(static_cast<std::size_t>(dim));
  for (int j = 0; j <= dim; ++j) {
    std::size_t w = 0;
    for (int x = 0; x <= dim; ++x)
      if (x != j) face[w++] = s[x];
    auto row = k.index_of(dim - 1, face.data());
    if (!row) throw DomainError("simplicial complex is not downward closed");
    col.emplace_back(static_cast<std::uint32_t>(*row), (j % 2 == 0) ? 1 : -1);
  }
  std::sort(col.begin(), col.end());
  return col;
}

/// Rank and cokernel torsion of the boundary map from dim-simplices to (dim-1)-simplices.
Reduction reduce_boundary(const SimplicialComplex& k, int dim, const HomologyOptions& opts) {
  std::size_t cols = k.count(dim);
  if (dim == 0) return Reduction{k.vertex_count() > 0 ? 1U : 0U, {}};
  std::size_t rows = k.count(dim - 1);
  if (cols == 0) return {};
  bool dense = cols <= opts.dense_cutoff && rows * cols <= std::size_t{1} << 23;
  if (dim == 1 && !dense) {
    // Graph incidence matrices are totally unimodular: free cokernel, rank V - components.
    return Reduction{k.vertex_count() - component_count(k), {}};
  }
  if (dense) {
    Dense<long long> m(rows, std::vector<long long>(cols, 0));
    for (std::size_t j = 0; j < cols; ++j)
      for (const auto& [row, value] : boundary_column(k, dim, j)) m[row][j] = value;
    return dense_reduction_any(m, rows, cols);
  }
  SparseEchelon echelon(rows);
  for (std::size_t j = 0; j < cols; ++j) echelon.add(boundary_column(k, dim, j));
  return echelon.finish();
}

}  // namespace

SmithForm smith_normal_form(const std::vector<std::vector<mpz_class>>& m, bool with_transforms) {
  std::size_t rows = m.size();
  std::size_t cols = rows == 0 ? 0 : m[0].size();
  for (const auto& row : m)
    if (row.size() != cols) throw DomainError("smith_normal_form: ragged matrix");
  Dense<mpz_class> a = m;
  SmithForm out;
  if (!with_transforms) {
    auto diag = diagonalize_in_place<mpz_class>(a, rows, cols, nullptr, nullptr, false);
    out.invariants = divisibility_chain(std::move(diag));
    return out;
  }
  Dense<mpz_class> u = identity_of<mpz_class>(rows);
  Dense<mpz_class> v = identity_of<mpz_class>(cols);
  out.invariants = diagonalize_in_place<mpz_class>(a, rows, cols, &u, &v, true);
  out.left = std::move(u);
  out.right = std::move(v);
  return out;
}

long HomologyProfile::betti_at(int degree) const {
  if (degree < -1 || degree > max_degree) return 0;
  return betti[static_cast<std::size_t>(degree + 1)];
}

const std::vector<mpz_class>& HomologyProfile::torsion_at(int degree) const {
  static const std::vector<mpz_class> none;
  if (degree < -1 || degree > max_degree) return none;
  return torsion[static_cast<std::size_t>(degree + 1)];
}

bool HomologyProfile::torsion_free() const {
  return std::all_of(torsion.begin(), torsion.end(), [](const auto& t) { return t.empty(); });
}

bool HomologyProfile::is_wedge_of_spheres(int d) const {
  if (!torsion_free()) return false;
  for (int i = -1; i <= max_degree; ++i)
    if (i != d && betti_at(i) != 0) return false;
  return true;
}

bool HomologyProfile::vanishes_through(int k) const {
  for (int i = -1; i <= std::min(k, max_degree); ++i)
    if (betti_at(i) != 0 || !torsion_at(i).empty()) return false;
  return true;
}

bool HomologyProfile::same_groups(const HomologyProfile& other) const {
  for (int i = -1; i <= std::max(max_degree, other.max_degree); ++i)
    if (betti_at(i) != other.betti_at(i) || torsion_at(i) != other.torsion_at(i)) return false;
  return true;
}

std::string HomologyProfile::to_string() const {
  std::ostringstream out;
  for (int i = -1; i <= max_degree; ++i) {
    if (i > -1) out << ' ';
    out << 'H' << i << '=' << betti_at(i);
    for (const auto& t : torsion_at(i)) out << "+Z/" << t.get_str();
  }
  return out.str();
}

HomologyProfile reduced_homology(const SimplicialComplex& k, std::optional<int> max_degree,
                                 const HomologyOptions& opts) {
  int top = max_degree.value_or(k.dimension());
  if (top < -1) top = -1;
  if (top + 1 > k.complete_through())
    throw DomainError("reduced_homology: degree " + std::to_string(top) + " needs simplices through dimension " +
                      std::to_string(top + 1) + ", complex is complete only through " +
                      std::to_string(k.complete_through()));
  // reductions[j] describes the boundary out of dimension j - 1 (j = 0 is the augmentation).
  std::vector<Reduction> reductions;
  for (int dim = 0; dim <= top + 1; ++dim) reductions.push_back(reduce_boundary(k, dim, opts));

  HomologyProfile h;
  h.max_degree = top;
  for (int i = -1; i <= top; ++i) {
    long chains = i == -1 ? 1 : static_cast<long>(k.count(i));
    long out_rank = i == -1 ? 0 : static_cast<long>(reductions[static_cast<std::size_t>(i)].rank);
    const Reduction& in = reductions[static_cast<std::size_t>(i + 1)];
    h.betti.push_back(chains - out_rank - static_cast<long>(in.rank));
    h.torsion.push_back(in.torsion);
  }
  if (top >= 0 && k.vertex_count() > 0) {
    long components = static_cast<long>(component_count(k));
    if (h.betti_at(0) != components - 1)
      throw Error("reduced_homology: b0 = " + std::to_string(h.betti_at(0)) + " disagrees with " +
                  std::to_string(components) + " union-find components");
  }
  return h;
}

HomologyProfile poset_homology(const Poset& p, const HomologyOptions& opts) {
  return reduced_homology(order_complex(p), std::nullopt, opts);
}

}  // namespace stiefel
