#pragma once

#include <cstdint>
#include <vector>

#include "stiefel/fp.hpp"

namespace stiefel::detail {

/// Bits of `out` that are set in `a` and `b` and lie strictly above `v`.
inline void intersect_above(const std::uint64_t* a, const std::uint64_t* b, std::size_t words, std::uint32_t v,
                            std::uint64_t* out) {
  std::size_t w0 = v / 64;
  for (std::size_t w = 0; w < w0; ++w) out[w] = 0;
  for (std::size_t w = w0; w < words; ++w) out[w] = a[w] & b[w];
  std::uint64_t keep = (v % 64 == 63) ? 0 : (~std::uint64_t{0} << (v % 64 + 1));
  out[w0] &= keep;
}

/**
 * Visits every clique of size 1..max_size inside `allowed` once, as a strictly
 * increasing index tuple, in depth-first order (so each size comes out
 * lexicographically sorted). Returns true when some clique of size max_size
 * extends to a larger one.
 */
template <class Visit>
bool for_each_clique(const fp::OrthogonalityGraph& g, const std::vector<std::uint64_t>& allowed,
                     std::size_t max_size, Visit&& visit) {
  std::size_t words = g.words();
  if (max_size == 0) return false;
  std::vector<std::vector<std::uint64_t>> cand(max_size, std::vector<std::uint64_t>(words));
  std::vector<std::uint64_t> probe(words);
  std::vector<std::uint32_t> clique(max_size);
  cand[0] = allowed;
  bool extends = false;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    const std::vector<std::uint64_t>& c = cand[depth];
    for (std::size_t w = 0; w < words; ++w)
      for (std::uint64_t bits = c[w]; bits != 0; bits &= bits - 1) {
        auto v = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
        clique[depth] = v;
        visit(static_cast<const std::uint32_t*>(clique.data()), depth + 1);
        if (depth + 1 < max_size) {
          intersect_above(c.data(), g.row(v), words, v, cand[depth + 1].data());
          self(self, depth + 1);
        } else if (!extends) {
          intersect_above(c.data(), g.row(v), words, v, probe.data());
          for (std::uint64_t x : probe)
            if (x) {
              extends = true;
              break;
            }
        }
      }
  };
  rec(rec, 0);
  return extends;
}

inline std::vector<std::uint64_t> all_bits(std::size_t n) {
  std::vector<std::uint64_t> b((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64) b.back() = (std::uint64_t{1} << (n % 64)) - 1;
  if (n == 0) b.clear();
  return b;
}

}  // namespace stiefel::detail
