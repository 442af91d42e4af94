#pragma once

// Standard parabolic subgroups of SL_n(F_p), the graph automorphism of type
// A_{n-1}, and the fixed-line count used to tell parabolics apart up to
// conjugacy.

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "profin/matgroup.hpp"

namespace profin {

/// A subset theta of the simple roots {1, ..., n-1} of SL_n. Roots in theta
/// are the ones kept inside the Levi factor; the block boundaries of P_theta
/// sit at the simple roots outside theta.
struct RootSubset {
  std::size_t n = 0;
  std::set<std::size_t> roots;

  RootSubset() = default;
  RootSubset(std::size_t n, std::set<std::size_t> roots);

  static RootSubset from_blocks(const std::vector<std::size_t>& sizes);
  static RootSubset borel(std::size_t n) { return RootSubset(n, {}); }
  static RootSubset full(std::size_t n);

  std::vector<std::size_t> blocks() const;
  /// Image under the diagram symmetry i -> n - i.
  RootSubset dynkin_image() const;
  bool dynkin_invariant() const { return dynkin_image() == *this; }

  friend bool operator==(const RootSubset&, const RootSubset&) = default;
};

struct ParabolicSpec {
  std::size_t n = 0;
  u64 p = 0;
  RootSubset theta;

  ParabolicSpec(u64 p, RootSubset theta);
};

/// True when every entry below the block diagonal vanishes mod p. Works for
/// matrices over any Z/p^e, testing the image mod p.
bool in_parabolic(const SLMat& g, const RootSubset& theta, u64 p);
/// Membership for g over F_p itself.
bool parabolic_membership(const SLMat& g, const ParabolicSpec& P);

/// p^{#entries above the blocks} * prod |GL_{b_i}(F_p)| / (p - 1).
BigInt parabolic_order(const ParabolicSpec& P);

/// Root elements I + E_ij for i < j and for i > j inside a diagonal block,
/// plus one torus element diag(.., r, .., r^-1, ..) per pair of adjacent
/// blocks, with r of order p - 1. Entries are written over Z/p^e so the
/// same list generates the parabolic part of a pullback at level e.
std::vector<SLMat> parabolic_generators(const ParabolicSpec& P, unsigned e = 1);

/// g -> w0 (g^T)^{-1} w0^{-1}, where w0 is the reversal permutation matrix
/// with its (1, n) entry negated when the reversal is an odd permutation.
class GraphAutomorphism {
 public:
  /// `corrupt_sign` flips the sign rule for w0, giving det(w0) = -1; kept as
  /// a fault-injection hook for the negative controls.
  GraphAutomorphism(std::size_t n, u64 modulus, bool corrupt_sign = false);

  SLMat operator()(const SLMat& g) const;
  SLMat inverse(const SLMat& g) const;

  std::size_t n() const noexcept { return n_; }
  u64 modulus() const noexcept { return modulus_; }
  const raw::Entries& w0() const noexcept { return w0_; }
  u64 w0_determinant() const;
  /// c = w0 (w0^T)^{-1}; applying twice gives g -> c g c^{-1}.
  raw::Entries square_conjugator() const;

 private:
  std::size_t n_;
  u64 modulus_;
  raw::Entries w0_;
  raw::Entries w0_inv_;
};

SLMat graph_automorphism(const SLMat& g);

/// Number of lines of F_p^n fixed by every matrix in gens.
std::size_t fixed_lines(std::span<const SLMat> gens, std::size_t n, u64 p);
/// Lines fixed by all of P; a conjugation invariant.
std::size_t fixed_lines(const ParabolicSpec& P);

}  // namespace profin
