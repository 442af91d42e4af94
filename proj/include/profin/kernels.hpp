#pragma once

// Batched modular kernels. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the dispatcher picks AVX2 when the CPU has it
// and the modulus fits the exact double-precision reduction (m < 2^26).
//
// Layout is structure-of-arrays: entry (i, j) of matrix k in a batch of
// `count` n x n matrices lives at [(i * n + j) * count + k]; coordinate i
// of vector k lives at [i * count + k].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace profin::kernels {

enum class Path { scalar, avx2 };

const char* to_string(Path path);

/// Largest modulus (exclusive) the AVX2 path accepts.
constexpr std::uint32_t kAvx2ModulusLimit = 1u << 26;

bool avx2_available();
/// Path used for a given modulus under the current override.
Path select_path(std::uint32_t modulus);
/// Pins the dispatcher to one path (nullopt restores auto-detection).
/// Setting avx2 on a machine without it throws std::runtime_error.
void force_path(std::optional<Path> path);

/// out[k] = a[k] * b[k] mod m.
void matmul_mod_batch(std::size_t n, std::size_t count, std::span<const std::uint32_t> a,
                      std::span<const std::uint32_t> b, std::span<std::uint32_t> out, std::uint32_t m);

/// out[k] = g * v[k] mod m for one row-major n x n matrix g.
void matvec_mod_batch(std::size_t n, std::size_t count, std::span<const std::uint32_t> g,
                      std::span<const std::uint32_t> v, std::span<std::uint32_t> out, std::uint32_t m);

namespace scalar {
void matmul_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* out, std::uint32_t m);
void matvec_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* g, const std::uint32_t* v,
                      std::uint32_t* out, std::uint32_t m);
}  // namespace scalar

namespace avx2 {
void matmul_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* a, const std::uint32_t* b,
                      std::uint32_t* out, std::uint32_t m);
void matvec_mod_batch(std::size_t n, std::size_t count, const std::uint32_t* g, const std::uint32_t* v,
                      std::uint32_t* out, std::uint32_t m);
}  // namespace avx2

}  // namespace profin::kernels
