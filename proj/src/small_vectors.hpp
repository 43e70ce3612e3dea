#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace stiefel::detail {

// Integer vectors of length m with max |c_i| == h for h = 1..max_height,
// lexicographic over [-h, h]^m within each h. Stops when visit returns true.
template <class Visit>
bool for_each_small_vector(std::size_t m, long max_height, Visit&& visit) {
  if (m == 0) return false;
  std::vector<long> c(m);
  for (long h = 1; h <= max_height; ++h) {
    std::fill(c.begin(), c.end(), -h);
    bool done = false;
    while (!done) {
      long top = 0;
      for (long x : c) top = std::max(top, std::labs(x));
      if (top == h && visit(c)) return true;
      done = true;
      for (std::size_t i = m; i-- > 0;) {
        if (c[i] < h) {
          ++c[i];
          done = false;
          break;
        }
        c[i] = -h;
      }
    }
  }
  return false;
}

}  // namespace stiefel::detail
