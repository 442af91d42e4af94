#include <atomic>
#include <stdexcept>

#include "profin/kernels.hpp"

namespace profin::kernels {

namespace {

// -1 = auto, otherwise a Path value
std::atomic<int> g_override{-1};

}  // namespace

const char* to_string(Path path) { return path == Path::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(PROFIN_HAVE_AVX2_TU)
  static const bool available = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return available;
#else
  return false;
#endif
}

void force_path(std::optional<Path> path) {
  if (path == Path::avx2 && !avx2_available()) throw std::runtime_error("AVX2 is not available on this CPU");
  g_override.store(path ? static_cast<int>(*path) : -1);
}

Path select_path(std::uint32_t modulus) {
  const int forced = g_override.load();
  if (forced == static_cast<int>(Path::scalar)) return Path::scalar;
  if (modulus >= kAvx2ModulusLimit || !avx2_available()) return Path::scalar;
  return Path::avx2;
}

namespace {

void check_sizes(std::size_t need, std::size_t have) {
  if (have < need) throw std::invalid_argument("kernel buffer too small");
}

}  // namespace

void matmul_mod_batch(std::size_t n, std::size_t count, std::span<const std::uint32_t> a,
                      std::span<const std::uint32_t> b, std::span<std::uint32_t> out, std::uint32_t m) {
  const std::size_t need = n * n * count;
  check_sizes(need, a.size());
  check_sizes(need, b.size());
  check_sizes(need, out.size());
#if defined(PROFIN_HAVE_AVX2_TU)
  if (select_path(m) == Path::avx2) {
    avx2::matmul_mod_batch(n, count, a.data(), b.data(), out.data(), m);
    return;
  }
#endif
  scalar::matmul_mod_batch(n, count, a.data(), b.data(), out.data(), m);
}

void matvec_mod_batch(std::size_t n, std::size_t count, std::span<const std::uint32_t> g,
                      std::span<const std::uint32_t> v, std::span<std::uint32_t> out, std::uint32_t m) {
  check_sizes(n * n, g.size());
  check_sizes(n * count, v.size());
  check_sizes(n * count, out.size());
#if defined(PROFIN_HAVE_AVX2_TU)
  if (select_path(m) == Path::avx2) {
    avx2::matvec_mod_batch(n, count, g.data(), v.data(), out.data(), m);
    return;
  }
#endif
  scalar::matvec_mod_batch(n, count, g.data(), v.data(), out.data(), m);
}

#if !defined(PROFIN_HAVE_AVX2_TU)
namespace avx2 {
void matmul_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* out, std::uint32_t m) {
  scalar::matmul_mod_batch(n, count, a, b, out, m);
}
void matvec_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* g, const std::uint32_t* v,
                      std::uint32_t* out, std::uint32_t m) {
  scalar::matvec_mod_batch(n, count, g, v, out, m);
}
}  // namespace avx2
#endif

}  // namespace profin::kernels
