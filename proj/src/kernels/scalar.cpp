#include "profin/kernels.hpp"

namespace profin::kernels::scalar {

void matmul_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* out, std::uint32_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t* dst = out + (i * n + j) * count;
      for (std::size_t k = 0; k < count; ++k) {
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
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t* dst = out + i * count;
    for (std::size_t k = 0; k < count; ++k) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += std::uint64_t{g[i * n + j]} * v[j * count + k] % m;
      dst[k] = static_cast<std::uint32_t>(acc % m);
    }
  }
}

}  // namespace profin::kernels::scalar
