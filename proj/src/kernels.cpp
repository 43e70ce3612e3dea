#include "stiefel/kernels.hpp"

#include <cstdlib>
#include <string>

#include "stiefel/error.hpp"

namespace stiefel::kernels {
namespace {

void check_bounds(std::size_t dim, std::uint32_t p) {
  if (p < 2 || p > kMaxModulus) throw DomainError("kernel modulus out of range: " + std::to_string(p));
  if (dim > kMaxDim) throw DomainError("kernel dimension out of range: " + std::to_string(dim));
}

void require_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) throw DomainError("AVX2 backend requested but not supported");
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

Backend active_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("STIEFEL_LAB_KERNEL");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2") {
      if (!avx2_supported()) throw DomainError("STIEFEL_LAB_KERNEL=avx2 but the CPU lacks AVX2");
      return Backend::Avx2;
    }
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
  }();
  return chosen;
}

void dot_mod(Backend backend, const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
             const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out) {
  check_bounds(dim, p);
  require_backend(backend);
  if (backend == Backend::Avx2)
    detail::dot_mod_avx2(soa, stride, count, dim, weights, p, out);
  else
    detail::dot_mod_scalar(soa, stride, count, dim, weights, p, out);
}

void quadratic_form_mod(Backend backend, const std::uint32_t* soa, std::size_t stride, std::size_t count,
                        std::size_t dim, const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out) {
  check_bounds(dim, p);
  require_backend(backend);
  if (backend == Backend::Avx2)
    detail::quadratic_form_mod_avx2(soa, stride, count, dim, gram, p, out);
  else
    detail::quadratic_form_mod_scalar(soa, stride, count, dim, gram, p, out);
}

namespace detail {

void dot_mod_scalar(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                    const std::uint32_t* weights, std::uint32_t p, std::uint32_t* out) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t acc = 0;
    for (std::size_t j = 0; j < dim; ++j) acc += soa[j * stride + i] * weights[j];
    out[i] = acc % p;
  }
}

void quadratic_form_mod_scalar(const std::uint32_t* soa, std::size_t stride, std::size_t count, std::size_t dim,
                               const std::uint32_t* gram, std::uint32_t p, std::uint32_t* out) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t total = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint32_t row = 0;
      for (std::size_t k = 0; k < dim; ++k) row += gram[j * dim + k] * soa[k * stride + i];
      total += soa[j * stride + i] * (row % p);
    }
    out[i] = total % p;
  }
}

}  // namespace detail
}  // namespace stiefel::kernels
