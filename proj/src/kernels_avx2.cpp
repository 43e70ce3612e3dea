#include "stiefel/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define STIEFEL_AVX2 __attribute__((target("avx2")))
#endif

namespace stiefel::kernels::detail {

#if defined(STIEFEL_AVX2)
namespace {

// a mod p for 0 <= a < 2^24; the float quotient is off by at most one.
STIEFEL_AVX2 inline __m256i mod_lanes(__m256i a, __m256 inv_p, __m256i pv, __m256i pm1) {
  const __m256i q = _mm256_cvttps_epi32(_mm256_mul_ps(_mm256_cvtepi32_ps(a), inv_p));
  __m256i r = _mm256_sub_epi32(a, _mm256_mullo_epi32(q, pv));
  r = _mm256_add_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(_mm256_setzero_si256(), r), pv));
  r = _mm256_sub_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(r, pm1), pv));
  return r;
}

}  // namespace

STIEFEL_AVX2 void dot_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                               const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out) {
  const __m256 inv_p = _mm256_set1_ps(1.0f / static_cast<float>(p));
  const __m256i pv = _mm256_set1_epi32(static_cast<int>(p));
  const __m256i pm1 = _mm256_set1_epi32(static_cast<int>(p - 1));
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(soa + j * stride + i));
      acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(x, _mm256_set1_epi32(static_cast<int>(weights[j]))));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mod_lanes(acc, inv_p, pv, pm1));
  }
  if (i < count) dot_mod_scalar(soa + i, stride, count - i, dim, weights, p, out + i);
}

STIEFEL_AVX2 void quadratic_form_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count,
                                          std::size_t dim, const std::uint32_t* gram, std::uint32_t p,
                                          std::uint32_t* out) {
  const __m256 inv_p = _mm256_set1_ps(1.0f / static_cast<float>(p));
  const __m256i pv = _mm256_set1_epi32(static_cast<int>(p));
  const __m256i pm1 = _mm256_set1_epi32(static_cast<int>(p - 1));
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i total = _mm256_setzero_si256();
    for (std::size_t j = 0; j < dim; ++j) {
      __m256i row = _mm256_setzero_si256();
      for (std::size_t k = 0; k < dim; ++k) {
        const std::uint32_t g = gram[j * dim + k];
        if (g == 0) continue;
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(soa + k * stride + i));
        row = _mm256_add_epi32(row, _mm256_mullo_epi32(x, _mm256_set1_epi32(static_cast<int>(g))));
      }
      const __m256i xj = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(soa + j * stride + i));
      total = _mm256_add_epi32(total, _mm256_mullo_epi32(xj, mod_lanes(row, inv_p, pv, pm1)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mod_lanes(total, inv_p, pv, pm1));
  }
  if (i < count) quadratic_form_mod_scalar(soa + i, stride, count - i, dim, gram, p, out + i);
}

#else

void dot_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                  const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out) {
  dot_mod_scalar(soa, stride, count, dim, weights, p, out);
}

void quadratic_form_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                             const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out) {
  quadratic_form_mod_scalar(soa, stride, count, dim, gram, p, out);
}

#endif

}  // namespace stiefel::kernels::detail
