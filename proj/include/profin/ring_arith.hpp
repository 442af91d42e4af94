#pragma once

// Exact arithmetic in Z and the real quadratic rings Z[sqrt(d)]: primality,
// prime splitting, Hensel lifting of square roots, CRT decomposition of
// residue rings and Galois conjugation of elements and places.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace profin {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Thrown for inputs that violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown for inputs that are well formed but outside what is modeled
/// (inert or ramified residue arithmetic, p = 2 where odd primes are needed).
class Unsupported : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Integer helpers

u64 mul_mod(u64 a, u64 b, u64 m);
u64 add_mod(u64 a, u64 b, u64 m);
u64 sub_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
/// Canonical representative of x in [0, m).
u64 reduce(i64 x, u64 m);
/// Inverse of a modulo m; throws InputError when gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);
/// b^e, throwing std::overflow_error past 64 bits.
u64 checked_pow(u64 b, unsigned e);

/// Deterministic Miller-Rabin over all 64-bit inputs.
bool is_prime(u64 n);
bool is_squarefree(i64 d);
/// Distinct prime divisors, ascending.
std::vector<u64> prime_divisors(u64 n);
/// Euler phi of p^e.
u64 phi_prime_power(u64 p, unsigned e);
/// Smallest generator of the cyclic group (Z/p^e)^x, p odd.
u64 smallest_primitive_root(u64 p, unsigned e);
/// Multiplicative order of a unit a modulo m with known group order.
u64 multiplicative_order(u64 a, u64 m, u64 group_order);

// ---------------------------------------------------------------------------
// Quadratic integers

/// a + b*sqrt(d) with d squarefree, d >= 2.
class QuadInt {
 public:
  QuadInt(i64 a, i64 b, i64 d);

  i64 a() const noexcept { return a_; }
  i64 b() const noexcept { return b_; }
  i64 d() const noexcept { return d_; }

  friend QuadInt operator+(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator*(const QuadInt& x, const QuadInt& y);
  friend bool operator==(const QuadInt&, const QuadInt&) = default;

 private:
  i64 a_;
  i64 b_;
  i64 d_;
};

QuadInt galois_conj(const QuadInt& x);

// ---------------------------------------------------------------------------
// Places

enum class PlaceKind { split_first, split_second, inert, ramified, rational };

const char* to_string(PlaceKind kind);
PlaceKind place_kind_from_string(const std::string& s);

/// A finite place of Q or of Q(sqrt(d)). Split places carry the square root
/// of d modulo p that defines them; split_first takes the smaller root.
struct PrimePlace {
  u64 p = 0;
  PlaceKind kind = PlaceKind::rational;
  std::optional<u64> root;
  std::string label;

  static PrimePlace rational(u64 p);
  /// Both split places over p in Z[sqrt(d)]; throws InputError when p does not split.
  static std::pair<PrimePlace, PrimePlace> split_pair(u64 p, i64 d);

  bool is_split() const noexcept {
    return kind == PlaceKind::split_first || kind == PlaceKind::split_second;
  }

  friend bool operator==(const PrimePlace& x, const PrimePlace& y) {
    return x.p == y.p && x.kind == y.kind && x.root == y.root;
  }
  friend bool operator<(const PrimePlace& x, const PrimePlace& y) {
    if (x.p != y.p) return x.p < y.p;
    return static_cast<int>(x.kind) < static_cast<int>(y.kind);
  }
};

/// Swaps the two split places over p; fixes every other place.
PrimePlace conj_place(const PrimePlace& v);

// ---------------------------------------------------------------------------
// Splitting and prime search

enum class SplitType { split, inert, ramified };

const char* to_string(SplitType type);

struct Splitting {
  SplitType type;
  std::optional<std::pair<u64, u64>> roots;  // present iff split; ascending, sum to p

  bool split() const noexcept { return type == SplitType::split; }
};

/// Decomposition of the odd prime p in Z[sqrt(d)].
Splitting splitting_type(u64 p, i64 d);

/// Square root of a modulo the odd prime p (Tonelli-Shanks), if one exists.
std::optional<u64> sqrt_mod_prime(u64 a, u64 p);

struct Congruence {
  u64 modulus;
  u64 residue;
};

/// The `count` smallest odd primes p outside `exclude`, p not dividing d,
/// that split in Q(sqrt(d)) and satisfy the optional congruence. d = 1
/// stands for the rational ring, where every odd prime qualifies.
std::vector<u64> find_split_primes(i64 d, std::size_t count,
                                   const std::set<u64>& exclude = {},
                                   std::optional<Congruence> congruence = std::nullopt);

/// Unique r_e mod p^e with r_e^2 = d and r_e = r mod p.
u64 hensel_lift_sqrt(i64 d, u64 p, u64 r, unsigned e);

/// Order of the group of n-th roots of unity in (Z/p^e)^x.
u64 roots_of_unity_order(u64 n, u64 p, unsigned e);

// ---------------------------------------------------------------------------
// Residue rings

struct ResidueFactor {
  PrimePlace place;
  unsigned exponent = 1;
  u64 modulus = 0;      // p^exponent
  u64 lifted_root = 0;  // sqrt(d) mod p^exponent for split places, else 0
};

/// Product over factors of Z/p^e, each factor the completion of Z or
/// Z[sqrt(d)] at a split or rational place truncated at level e.
class ResidueRing {
 public:
  /// d = 0 for the rational ring Z.
  ResidueRing(i64 d, const std::vector<std::pair<PrimePlace, unsigned>>& levels);
  /// Rational ring from coprime prime powers (p, e); p = 2 allowed.
  static ResidueRing rational(const std::vector<std::pair<u64, unsigned>>& levels);

  i64 d() const noexcept { return d_; }
  const std::vector<ResidueFactor>& factors() const noexcept { return factors_; }
  std::vector<u64> moduli() const;
  /// Product of the factor moduli; throws unless they are pairwise coprime.
  u64 modulus() const;

 private:
  ResidueRing() = default;
  i64 d_ = 0;
  std::vector<ResidueFactor> factors_;
};

/// a + b*sqrt(d) -> a + b*lifted_root mod p^e. Ring homomorphism.
u64 residue_map(const QuadInt& x, const ResidueFactor& factor);
u64 residue_map(i64 x, const ResidueFactor& factor);

/// x mod M -> (x mod m_i); moduli must be pairwise coprime.
std::vector<u64> crt_split(u64 x, const std::vector<u64>& moduli);
u64 crt_join(const std::vector<u64>& residues, const std::vector<u64>& moduli);
std::vector<u64> crt_split(u64 x, const ResidueRing& ring);
u64 crt_join(const std::vector<u64>& residues, const ResidueRing& ring);

}  // namespace profin
