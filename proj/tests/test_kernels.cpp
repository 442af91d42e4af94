#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "profin/kernels.hpp"

using namespace profin;

namespace {

struct PathGuard {
  ~PathGuard() { kernels::force_path(std::nullopt); }
};

std::vector<std::uint32_t> random_entries(std::size_t size, std::uint32_t m, std::mt19937_64& rng) {
  std::vector<std::uint32_t> v(size);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng() % m);
  return v;
}

}  // namespace

TEST_CASE("scalar matmul kernel matches the oracle product") {
  std::mt19937_64 rng(1);
  const std::size_t n = 4, count = 9;
  const std::uint32_t m = 289;
  auto a = random_entries(n * n * count, m, rng), b = random_entries(n * n * count, m, rng);
  std::vector<std::uint32_t> c(n * n * count);
  kernels::scalar::matmul_mod_batch(n, count, a.data(), b.data(), c.data(), m);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<oracle::u64> x(n * n), y(n * n);
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      x[idx] = a[idx * count + k];
      y[idx] = b[idx * count + k];
    }
    auto z = oracle::matmul(n, m, x, y);
    for (std::size_t idx = 0; idx < n * n; ++idx) CHECK(c[idx * count + k] == z[idx]);
  }
}

TEST_CASE("avx2 kernels agree with scalar kernels bit for bit") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 unavailable; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(2);
  for (std::uint32_t m : {2u, 5u, 25u, 49u, 289u, 65521u, (1u << 26) - 5}) {
    for (std::size_t n : {2u, 3u, 4u, 7u}) {
      for (std::size_t count : {1u, 3u, 4u, 5u, 64u, 1001u}) {
        auto a = random_entries(n * n * count, m, rng), b = random_entries(n * n * count, m, rng);
        std::vector<std::uint32_t> s(n * n * count), v(n * n * count);
        kernels::scalar::matmul_mod_batch(n, count, a.data(), b.data(), s.data(), m);
        kernels::avx2::matmul_mod_batch(n, count, a.data(), b.data(), v.data(), m);
        REQUIRE(s == v);

        auto g = random_entries(n * n, m, rng);
        auto vec = random_entries(n * count, m, rng);
        std::vector<std::uint32_t> s2(n * count), v2(n * count);
        kernels::scalar::matvec_mod_batch(n, count, g.data(), vec.data(), s2.data(), m);
        kernels::avx2::matvec_mod_batch(n, count, g.data(), vec.data(), v2.data(), m);
        REQUIRE(s2 == v2);
      }
    }
  }
}

TEST_CASE("extreme operands") {
  if (!kernels::avx2_available()) return;
  const std::uint32_t m = (1u << 26) - 1;
  const std::size_t n = 8, count = 12;
  std::vector<std::uint32_t> a(n * n * count, m - 1), b(n * n * count, m - 1), s(n * n * count), v(n * n * count);
  kernels::scalar::matmul_mod_batch(n, count, a.data(), b.data(), s.data(), m);
  kernels::avx2::matmul_mod_batch(n, count, a.data(), b.data(), v.data(), m);
  CHECK(s == v);
  CHECK(s[0] == n % m);  // (m-1)^2 = 1, summed n times
}

TEST_CASE("dispatcher") {
  PathGuard guard;
  CHECK(kernels::select_path(1u << 27) == kernels::Path::scalar);
  kernels::force_path(kernels::Path::scalar);
  CHECK(kernels::select_path(5) == kernels::Path::scalar);
  kernels::force_path(std::nullopt);
  CHECK(kernels::select_path(5) == (kernels::avx2_available() ? kernels::Path::avx2 : kernels::Path::scalar));

  std::vector<std::uint32_t> small(3);
  CHECK_THROWS(kernels::matmul_mod_batch(2, 2, small, small, small, 5));
}

TEST_CASE("dispatched path matches scalar under both settings") {
  PathGuard guard;
  std::mt19937_64 rng(4);
  const std::size_t n = 4, count = 77;
  const std::uint32_t m = 343;
  auto a = random_entries(n * n * count, m, rng), b = random_entries(n * n * count, m, rng);
  std::vector<std::uint32_t> ref(n * n * count), got(n * n * count);
  kernels::scalar::matmul_mod_batch(n, count, a.data(), b.data(), ref.data(), m);
  for (auto path : {std::optional<kernels::Path>{kernels::Path::scalar}, std::optional<kernels::Path>{}}) {
    kernels::force_path(path);
    kernels::matmul_mod_batch(n, count, a, b, got, m);
    CHECK(got == ref);
  }
}
