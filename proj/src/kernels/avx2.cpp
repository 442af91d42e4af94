// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// CPU feature check.

#include <immintrin.h>

#include "profin/kernels.hpp"

namespace profin::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

// Exact x mod m for integral 0 <= x < 2^52 held in doubles.
inline __m256d mod_pd(__m256d x, __m256d m, __m256d inv_m) {
  const __m256d q = _mm256_floor_pd(_mm256_mul_pd(x, inv_m));
  __m256d r = _mm256_fnmadd_pd(q, m, x);
  const __m256d zero = _mm256_setzero_pd();
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), m));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, m, _CMP_GE_OQ), m));
  return r;
}

inline __m256d load4(const std::uint32_t* p) {
  return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

inline void store4(std::uint32_t* p, __m256d x) {
  _mm_storeu_si128(reinterpret_cast<__m128i*>(p), _mm256_cvttpd_epi32(x));
}

}  // namespace

void matmul_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* out, std::uint32_t m) {
  const __m256d vm = _mm256_set1_pd(static_cast<double>(m));
  const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(m));
  const std::size_t body = count - count % kLanes;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t* dst = out + (i * n + j) * count;
      for (std::size_t k = 0; k < body; k += kLanes) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t l = 0; l < n; ++l) {
          const __m256d x = load4(a + (i * n + l) * count + k);
          const __m256d y = load4(b + (l * n + j) * count + k);
          acc = _mm256_add_pd(acc, mod_pd(_mm256_mul_pd(x, y), vm, vinv));
        }
        store4(dst + k, mod_pd(acc, vm, vinv));
      }
      for (std::size_t k = body; k < count; ++k) {
        std::uint64_t acc = 0;
        for (std::size_t l = 0; l < n; ++l) {
          acc += std::uint64_t{a[(i * n + l) * count + k]} * b[(l * n + j) * count + k] % m;
        }
        dst[k] = static_cast<std::uint32_t>(acc % m);
      }
    }
  }
}

void matvec_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* g, const std::uint32_t* v,
                      std::uint32_t* out, std::uint32_t m) {
  const __m256d vm = _mm256_set1_pd(static_cast<double>(m));
  const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(m));
  const std::size_t body = count - count % kLanes;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t* dst = out + i * count;
    for (std::size_t k = 0; k < body; k += kLanes) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t j = 0; j < n; ++j) {
        const __m256d gij = _mm256_set1_pd(static_cast<double>(g[i * n + j]));
        acc = _mm256_add_pd(acc, mod_pd(_mm256_mul_pd(gij, load4(v + j * count + k)), vm, vinv));
      }
      store4(dst + k, mod_pd(acc, vm, vinv));
    }
    for (std::size_t k = body; k < count; ++k) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += std::uint64_t{g[i * n + j]} * v[j * count + k] % m;
      dst[k] = static_cast<std::uint32_t>(acc % m);
    }
  }
}

}  // namespace profin::kernels::avx2
