#pragma once

// Congruence subgroups of SL_n given by local conditions at finitely many
// places, and their images in the finite products prod_v SL_n(O_v / v^e).
//
// A FiniteQuotientGroup is an implicit group: membership is a predicate on
// tuples (g_v), the order comes from local formulas, and elements are drawn
// by a seeded sampler. Orders are exact; nothing here enumerates the group
// unless asked to through enumerate_group.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "profin/chevalley.hpp"
#include "profin/matgroup.hpp"
#include "profin/ring_arith.hpp"

namespace profin {

struct Full {
  friend bool operator==(const Full&, const Full&) = default;
};

/// g = I mod p^e.
struct Principal {
  unsigned e = 1;
  friend bool operator==(const Principal&, const Principal&) = default;
};

/// g = zeta I mod p^e, zeta in the canonical cyclic subgroup of order m.
struct CentralPrincipal {
  u64 m = 1;
  unsigned e = 1;
  friend bool operator==(const CentralPrincipal&, const CentralPrincipal&) = default;
};

/// g mod p lies in the standard parabolic P_theta.
struct ParabolicPullback {
  RootSubset theta;
  friend bool operator==(const ParabolicPullback&, const ParabolicPullback&) = default;
};

using LocalCondition = std::variant<Full, Principal, CentralPrincipal, ParabolicPullback>;

/// Smallest exponent at which the condition can be evaluated.
unsigned condition_depth(const LocalCondition& c);
std::string describe(const LocalCondition& c);

/// A congruence subgroup of SL_n(Z) (d = 0) or SL_n(Z[sqrt(d)]) with one
/// local condition per place of its finite support.
struct SubgroupSpec {
  std::size_t n = 0;
  i64 d = 0;
  std::vector<std::pair<PrimePlace, LocalCondition>> conditions;  // sorted by place

  static SubgroupSpec make(std::size_t n, i64 d, std::vector<std::pair<PrimePlace, LocalCondition>> conditions);
  const LocalCondition* condition_at(const PrimePlace& v) const;

  friend bool operator==(const SubgroupSpec&, const SubgroupSpec&) = default;
};

using Level = std::vector<std::pair<PrimePlace, unsigned>>;

/// One SL_n(Z/p^e) component per level place, in level order.
using AmbientElement = std::vector<SLMat>;

AmbientElement multiply(const AmbientElement& x, const AmbientElement& y);
AmbientElement invert(const AmbientElement& x);
bool is_identity(const AmbientElement& x);

struct LocalFactor {
  PrimePlace place;
  unsigned exponent = 1;
  u64 modulus = 0;
  LocalCondition condition;
  /// Canonical roots of unity zeta^k mod p^exponent, k = 0..m-1, for
  /// CentralPrincipal factors.
  std::vector<u64> central_powers;
};

/// (master, index) -> child seed. splitmix64(master + (index + 1) * golden)
/// run through a second splitmix64 round; stable across platforms and
/// independent of how indices are partitioned among workers.
u64 child_seed(u64 master, u64 index);

class FiniteQuotientGroup {
 public:
  FiniteQuotientGroup(SubgroupSpec spec, const Level& level);

  std::size_t n() const noexcept { return spec_.n; }
  const SubgroupSpec& spec() const noexcept { return spec_; }
  const std::vector<LocalFactor>& factors() const noexcept { return factors_; }
  std::optional<std::size_t> index_of(const PrimePlace& v) const;

  AmbientElement identity() const;
  bool member(const AmbientElement& g) const;
  bool local_member(std::size_t factor, const SLMat& g) const;
  /// Deterministic in the seed; always returns a member. Not uniform.
  AmbientElement sample(u64 seed) const;
  const BigInt& order() const noexcept { return order_; }
  /// Local generators embedded with identity at the other places.
  const std::vector<AmbientElement>& generators() const noexcept { return generators_; }
  /// Is the tuple (central_scalar at v, identity elsewhere) a member?
  bool central_presence(const PrimePlace& v, u64 m) const;
  /// The tuple tested by central_presence.
  AmbientElement central_element(const PrimePlace& v, u64 m) const;
  /// Entrywise reduction of matrices over Z (d = 0) or Z[sqrt(d)] into the ambient.
  AmbientElement reduce_global(std::span<const QuadInt> entries) const;
  AmbientElement reduce_global(std::span<const i64> entries) const;
  /// True when both quotients live in the same ambient product.
  bool same_ambient(const FiniteQuotientGroup& other) const;

 private:
  SLMat sample_local(std::size_t factor, std::mt19937_64& rng) const;
  SLMat sample_principal(std::size_t factor, unsigned depth, std::mt19937_64& rng) const;
  std::vector<SLMat> local_generators(std::size_t factor) const;

  SubgroupSpec spec_;
  std::vector<LocalFactor> factors_;
  BigInt order_;
  std::vector<AmbientElement> generators_;
  std::vector<std::vector<SLMat>> parabolic_words_;  // per factor; empty unless ParabolicPullback
};

FiniteQuotientGroup quotient_of(const SubgroupSpec& spec, const Level& level);

/// Local order of a condition at level e in SL_n(Z/p^e).
BigInt local_order(const LocalCondition& c, std::size_t n, u64 p, unsigned e);

/// All elements of the group generated by q.generators(), by closure; nullopt
/// once more than `limit` elements appear.
std::optional<std::vector<AmbientElement>> enumerate_group(const FiniteQuotientGroup& q, std::size_t limit);

/// Closure of a generating set inside SL_n(Z/m); nullopt past `limit`.
std::optional<std::size_t> closure_order(const std::vector<SLMat>& gens, std::size_t limit);

}  // namespace profin
