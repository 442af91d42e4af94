#pragma once

// Matrices of determinant one over Z/M, group orders, and the action of
// SL_n(F_p) on the lines of F_p^n.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "profin/ring_arith.hpp"

namespace profin {

using BigInt = boost::multiprecision::cpp_int;

/// Moduli are kept below 2^31 so entry products fit comfortably in 64 bits.
constexpr u64 kMaxModulus = u64{1} << 31;

void require_modulus(u64 modulus);

/// Unchecked row-major matrix routines over Z/m. SLMat is the checked face.
namespace raw {

using Entries = std::vector<u64>;

Entries identity(std::size_t n, u64 m);
Entries mul(std::size_t n, u64 m, std::span<const u64> a, std::span<const u64> b);
Entries transpose(std::size_t n, std::span<const u64> a);
u64 det(std::size_t n, u64 m, std::span<const u64> a);
/// Inverse when det(a) is a unit mod m; throws InputError otherwise.
Entries inverse(std::size_t n, u64 m, std::span<const u64> a);

}  // namespace raw

/// An element of SL_n(Z/M). Determinant one is checked whenever a matrix is
/// built from caller-supplied entries; entries are kept in [0, M).
class SLMat {
 public:
  static SLMat identity(std::size_t n, u64 modulus);
  static SLMat from_entries(std::size_t n, u64 modulus, std::span<const i64> entries);
  static SLMat from_entries(std::size_t n, u64 modulus, std::initializer_list<i64> entries);
  /// Takes already-reduced entries; throws unless det = 1.
  static SLMat from_reduced(std::size_t n, u64 modulus, raw::Entries entries);

  std::size_t n() const noexcept { return n_; }
  u64 modulus() const noexcept { return modulus_; }
  u64 at(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  const raw::Entries& entries() const noexcept { return entries_; }
  bool is_identity() const;

  friend bool operator==(const SLMat&, const SLMat&) = default;

  friend SLMat mat_mul(const SLMat& x, const SLMat& y);
  friend SLMat mat_inv(const SLMat& x);
  friend SLMat scale(const SLMat& x, u64 zeta);
  friend std::vector<SLMat> batch_mul(std::span<const SLMat> xs, std::span<const SLMat> ys);

 private:
  SLMat(std::size_t n, u64 modulus, raw::Entries entries)
      : n_(n), modulus_(modulus), entries_(std::move(entries)) {}

  std::size_t n_ = 0;
  u64 modulus_ = 0;
  raw::Entries entries_;
};

SLMat mat_mul(const SLMat& x, const SLMat& y);
inline SLMat operator*(const SLMat& x, const SLMat& y) { return mat_mul(x, y); }
SLMat mat_inv(const SLMat& x);
/// zeta * x for a scalar with zeta^n = 1; throws otherwise.
SLMat scale(const SLMat& x, u64 zeta);
/// Pairwise products xs[k] * ys[k] through the batched kernel; all inputs
/// share one dimension and modulus.
std::vector<SLMat> batch_mul(std::span<const SLMat> xs, std::span<const SLMat> ys);

/// Identity plus t at (i, j), zero-based indices, i != j.
SLMat elementary(std::size_t n, std::size_t i, std::size_t j, i64 t, u64 modulus);
/// -I; requires n even.
SLMat minus_identity(std::size_t n, u64 modulus);
/// zeta * I; throws unless zeta^n = 1.
SLMat scalar_matrix(std::size_t n, u64 modulus, u64 zeta);

/// The canonical element of order m in (Z/p^e)^x: smallest primitive root
/// raised to phi(p^e)/m. Requires m | p - 1.
u64 canonical_root_of_unity(u64 p, unsigned e, u64 m);
/// zeta * I with zeta the canonical root of order m; requires m | gcd(n, p - 1).
SLMat central_scalar(std::size_t n, u64 p, unsigned e, u64 m);

/// Entrywise reduction to a divisor of the modulus.
SLMat reduce_mod(const SLMat& x, u64 modulus);
/// Componentwise image under Z/M -> prod Z/m_i (pairwise coprime m_i).
std::vector<SLMat> crt_split(const SLMat& x, const std::vector<u64>& moduli);
SLMat crt_join(const std::vector<SLMat>& parts);

/// |SL_n(Z/p^e)| = p^{(n^2-1)(e-1)} p^{n(n-1)/2} prod_{i=2}^n (p^i - 1).
BigInt sl_order(std::size_t n, u64 p, unsigned e);
/// |GL_n(F_p)|.
BigInt gl_order(std::size_t n, u64 p);

struct SLMatHash {
  std::size_t operator()(const SLMat& x) const noexcept;
};

// ---------------------------------------------------------------------------
// Projective space over F_p

/// A line of F_p^n, normalized so its first nonzero coordinate is 1.
struct ProjPoint {
  std::vector<u64> coords;
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

ProjPoint normalize(std::vector<u64> v, u64 p);
/// All (p^n - 1)/(p - 1) lines, each once, ordered by line_index.
std::vector<ProjPoint> lines_of_projective_space(std::size_t n, u64 p);
std::size_t line_count(std::size_t n, u64 p);
/// Position of L in lines_of_projective_space(n, p).
std::size_t line_index(const ProjPoint& line, u64 p);
/// g . L for g over F_p.
ProjPoint act(const SLMat& g, const ProjPoint& line);

}  // namespace profin
