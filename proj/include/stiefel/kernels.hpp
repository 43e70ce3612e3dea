#pragma once

#include <cstddef>
#include <cstdint>

namespace stiefel::kernels {

/**
 * Batched arithmetic mod a small prime over vectors stored coordinate-major:
 * coordinate j of vector i lives at soa[j * stride + i].
 *
 * Every backend returns bit-identical results. Preconditions (checked by the
 * dispatching entry points): p <= kMaxModulus, dim <= kMaxDim, all inputs
 * already reduced mod p. Under these bounds every intermediate sum stays
 * below 2^24, which the AVX2 float-reciprocal reduction relies on.
 */
inline constexpr std::uint32_t kMaxModulus = 251;
inline constexpr std::size_t kMaxDim = 64;

enum class Backend { Scalar, Avx2 };

bool avx2_supported();
const char* backend_name(Backend b);

/// Backend chosen from the CPU, overridable with STIEFEL_LAB_KERNEL=scalar|avx2|auto.
Backend active_backend();

/// out[i] = sum_j soa[j*stride+i] * weights[j] mod p.
void dot_mod(Backend backend, const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
             const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out);

/// out[i] = x_i^T G x_i mod p for the dim x dim row-major Gram matrix `gram`.
void quadratic_form_mod(Backend backend, const std::uint32_t* soa, std::size_t stride, std::size_t count,
                        std::size_t dim, const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out);

namespace detail {
void dot_mod_scalar(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                    const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out);
void quadratic_form_mod_scalar(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                               const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out);
void dot_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                  const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out);
void quadratic_form_mod_avx2(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                             const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out);
}  // namespace detail

}  // namespace stiefel::kernels
