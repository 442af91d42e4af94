#include "profin/ring_arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace profin {

using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 reduce(i64 x, u64 m) {
  if (x >= 0) return static_cast<u64>(x) % m;
  // -(x + 1) avoids overflow at INT64_MIN
  u64 r = static_cast<u64>(-(x + 1)) % m;
  return m - 1 - r;
}

u64 inv_mod(u64 a, u64 m) {
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) {
    throw InputError(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  return reduce(old_s, m);
}

u64 checked_pow(u64 b, unsigned e) {
  u64 result = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(result, b, &result)) {
      throw std::overflow_error("integer power exceeds 64 bits");
    }
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_squarefree(i64 d) {
  if (d == 0) return false;
  u64 n = d < 0 ? static_cast<u64>(-(d + 1)) + 1 : static_cast<u64>(d);
  for (u64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      n /= f;
      if (n % f == 0) return false;
    }
  }
  return true;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 phi_prime_power(u64 p, unsigned e) { return checked_pow(p, e - 1) * (p - 1); }

u64 multiplicative_order(u64 a, u64 m, u64 group_order) {
  u64 order = group_order;
  for (u64 l : prime_divisors(group_order)) {
    while (order % l == 0 && pow_mod(a, order / l, m) == 1) order /= l;
  }
  return order;
}

u64 smallest_primitive_root(u64 p, unsigned e) {
  if (p == 2 || !is_prime(p)) throw InputError("primitive roots are taken modulo odd prime powers only");
  if (e == 0) throw InputError("exponent must be at least 1");
  const u64 m = checked_pow(p, e);
  const u64 phi = phi_prime_power(p, e);
  const auto ls = prime_divisors(phi);
  for (u64 g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool generator = std::all_of(ls.begin(), ls.end(),
                                 [&](u64 l) { return pow_mod(g, phi / l, m) != 1; });
    if (generator) return g;
  }
  throw std::logic_error("no primitive root found");
}

// ---------------------------------------------------------------------------

namespace {

i64 checked_add(i64 x, i64 y) {
  i64 r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("quadratic integer overflow");
  return r;
}

i64 checked_mul(i64 x, i64 y) {
  i64 r;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("quadratic integer overflow");
  return r;
}

void require_same_ring(const QuadInt& x, const QuadInt& y) {
  if (x.d() != y.d()) throw InputError("quadratic integers from different rings combined");
}

}  // namespace

QuadInt::QuadInt(i64 a, i64 b, i64 d) : a_(a), b_(b), d_(d) {
  if (d < 2 || !is_squarefree(d)) {
    throw InputError("quadratic ring parameter must be squarefree and >= 2, got " + std::to_string(d));
  }
}

QuadInt operator+(const QuadInt& x, const QuadInt& y) {
  require_same_ring(x, y);
  return QuadInt(checked_add(x.a_, y.a_), checked_add(x.b_, y.b_), x.d_);
}

QuadInt operator-(const QuadInt& x, const QuadInt& y) {
  require_same_ring(x, y);
  return QuadInt(checked_add(x.a_, -y.a_), checked_add(x.b_, -y.b_), x.d_);
}

QuadInt operator*(const QuadInt& x, const QuadInt& y) {
  require_same_ring(x, y);
  i64 a = checked_add(checked_mul(x.a_, y.a_), checked_mul(checked_mul(x.b_, y.b_), x.d_));
  i64 b = checked_add(checked_mul(x.a_, y.b_), checked_mul(x.b_, y.a_));
  return QuadInt(a, b, x.d_);
}

QuadInt galois_conj(const QuadInt& x) { return QuadInt(x.a(), -x.b(), x.d()); }

// ---------------------------------------------------------------------------

const char* to_string(PlaceKind kind) {
  switch (kind) {
    case PlaceKind::split_first: return "split_first";
    case PlaceKind::split_second: return "split_second";
    case PlaceKind::inert: return "inert";
    case PlaceKind::ramified: return "ramified";
    case PlaceKind::rational: return "rational";
  }
  return "?";
}

PlaceKind place_kind_from_string(const std::string& s) {
  for (auto k : {PlaceKind::split_first, PlaceKind::split_second, PlaceKind::inert,
                 PlaceKind::ramified, PlaceKind::rational}) {
    if (s == to_string(k)) return k;
  }
  throw InputError("unknown place kind '" + s + "'");
}

const char* to_string(SplitType type) {
  switch (type) {
    case SplitType::split: return "split";
    case SplitType::inert: return "inert";
    case SplitType::ramified: return "ramified";
  }
  return "?";
}

PrimePlace PrimePlace::rational(u64 p) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  return PrimePlace{p, PlaceKind::rational, std::nullopt, std::to_string(p)};
}

std::pair<PrimePlace, PrimePlace> PrimePlace::split_pair(u64 p, i64 d) {
  Splitting s = splitting_type(p, d);
  if (!s.split()) {
    throw InputError(std::to_string(p) + " is " + to_string(s.type) + " in Z[sqrt(" +
                     std::to_string(d) + ")], not split");
  }
  auto [r1, r2] = *s.roots;
  const std::string base = std::to_string(p);
  return {PrimePlace{p, PlaceKind::split_first, r1, base + ".1"},
          PrimePlace{p, PlaceKind::split_second, r2, base + ".2"}};
}

PrimePlace conj_place(const PrimePlace& v) {
  if (!v.is_split()) return v;
  PrimePlace w = v;
  w.kind = v.kind == PlaceKind::split_first ? PlaceKind::split_second : PlaceKind::split_first;
  w.root = (v.p - *v.root) % v.p;
  const std::string base = std::to_string(v.p);
  w.label = base + (w.kind == PlaceKind::split_first ? ".1" : ".2");
  return w;
}

// ---------------------------------------------------------------------------

namespace {

void require_odd_prime(u64 p) {
  if (p == 2) throw InputError("p = 2 is excluded; odd primes only");
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
}

}  // namespace

std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 c = pow_mod(z, q, p);
  u64 x = pow_mod(a, (q + 1) / 2, p);
  u64 t = pow_mod(a, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    u64 tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    x = mul_mod(x, b, p);
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    m = i;
  }
  return x;
}

Splitting splitting_type(u64 p, i64 d) {
  require_odd_prime(p);
  if (!is_squarefree(d)) throw InputError(std::to_string(d) + " is not squarefree");
  const u64 dm = reduce(d, p);
  if (dm == 0) return {SplitType::ramified, std::nullopt};
  auto r = sqrt_mod_prime(dm, p);
  if (!r) return {SplitType::inert, std::nullopt};
  u64 lo = std::min(*r, p - *r);
  return {SplitType::split, std::make_pair(lo, p - lo)};
}

std::vector<u64> find_split_primes(i64 d, std::size_t count, const std::set<u64>& exclude,
                                   std::optional<Congruence> congruence) {
  if (count == 0) throw InputError("count must be positive");
  if (d != 1 && !is_squarefree(d)) throw InputError(std::to_string(d) + " is not squarefree");
  if (congruence) {
    if (congruence->modulus == 0) throw InputError("congruence modulus must be positive");
    if (std::gcd(congruence->residue % congruence->modulus, congruence->modulus) != 1) {
      throw InputError("congruence residue must be coprime to its modulus");
    }
  }
  constexpr std::size_t kCandidateCap = 1'000'000;
  std::vector<u64> found;
  std::size_t candidates = 0;
  for (u64 p = 3; found.size() < count; p += 2) {
    if (!is_prime(p)) continue;
    if (++candidates > kCandidateCap) {
      throw std::runtime_error("prime search exceeded 10^6 candidates; check the configuration");
    }
    if (exclude.count(p)) continue;
    if (congruence && p % congruence->modulus != congruence->residue % congruence->modulus) continue;
    if (d != 1) {
      if (reduce(d, p) == 0) continue;
      if (!splitting_type(p, d).split()) continue;
    }
    found.push_back(p);
  }
  return found;
}

u64 hensel_lift_sqrt(i64 d, u64 p, u64 r, unsigned e) {
  require_odd_prime(p);
  if (e == 0) throw InputError("exponent must be at least 1");
  const u64 dp = reduce(d, p);
  if (dp == 0) throw InputError("p divides d; the square root does not lift uniquely");
  if (r >= p || mul_mod(r, r, p) != dp) {
    throw InputError(std::to_string(r) + " is not a square root of d modulo " + std::to_string(p));
  }
  u64 root = r;
  u64 modulus = p;
  for (unsigned k = 1; k < e; ++k) {
    if (__builtin_mul_overflow(modulus, p, &modulus)) throw std::overflow_error("p^e exceeds 64 bits");
    // Newton step: root - (root^2 - d) / (2 root)
    u64 f = sub_mod(mul_mod(root, root, modulus), reduce(d, modulus), modulus);
    u64 step = mul_mod(f, inv_mod(mul_mod(2, root, modulus), modulus), modulus);
    root = sub_mod(root % modulus, step, modulus);
  }
  return root;
}

u64 roots_of_unity_order(u64 n, u64 p, unsigned e) {
  require_odd_prime(p);
  if (e == 0) throw InputError("exponent must be at least 1");
  if (n == 0) throw InputError("n must be positive");
  if (n % p == 0) throw Unsupported("p divides n; only the tame case is modeled");
  return std::gcd(n, p - 1);
}

// ---------------------------------------------------------------------------

ResidueRing::ResidueRing(i64 d, const std::vector<std::pair<PrimePlace, unsigned>>& levels) : d_(d) {
  if (d != 0 && (d < 2 || !is_squarefree(d))) throw InputError("ring parameter must be 0 or squarefree >= 2");
  for (const auto& [place, e] : levels) {
    if (e == 0) throw InputError("exponent must be at least 1");
    for (const auto& f : factors_) {
      if (f.place == place) throw InputError("duplicate place " + place.label + " in residue ring");
    }
    ResidueFactor f;
    f.place = place;
    f.exponent = e;
    f.modulus = checked_pow(place.p, e);
    if (place.is_split()) {
      if (d == 0) throw InputError("split place " + place.label + " over the rational ring");
      f.lifted_root = hensel_lift_sqrt(d, place.p, *place.root, e);
    } else if (place.kind != PlaceKind::rational) {
      throw Unsupported("residue rings at " + std::string(to_string(place.kind)) + " places are not modeled");
    }
    factors_.push_back(std::move(f));
  }
}

ResidueRing ResidueRing::rational(const std::vector<std::pair<u64, unsigned>>& levels) {
  ResidueRing ring;
  for (const auto& [p, e] : levels) {
    std::vector<std::pair<PrimePlace, unsigned>> one{{PrimePlace::rational(p), e}};
    ResidueRing single(0, one);
    for (const auto& f : ring.factors_) {
      if (f.place.p == p) throw InputError("duplicate prime in residue ring");
    }
    ring.factors_.push_back(single.factors_.front());
  }
  return ring;
}

std::vector<u64> ResidueRing::moduli() const {
  std::vector<u64> out;
  for (const auto& f : factors_) out.push_back(f.modulus);
  return out;
}

namespace {

void require_coprime(const std::vector<u64>& moduli) {
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] == 0) throw InputError("zero modulus");
    for (std::size_t j = i + 1; j < moduli.size(); ++j) {
      if (std::gcd(moduli[i], moduli[j]) != 1) throw InputError("CRT factors must have coprime moduli");
    }
  }
}

u64 product_of(const std::vector<u64>& moduli) {
  u64 m = 1;
  for (u64 x : moduli) {
    if (__builtin_mul_overflow(m, x, &m)) throw std::overflow_error("modulus product exceeds 64 bits");
  }
  return m;
}

}  // namespace

u64 ResidueRing::modulus() const {
  auto ms = moduli();
  require_coprime(ms);
  return product_of(ms);
}

u64 residue_map(const QuadInt& x, const ResidueFactor& factor) {
  if (!factor.place.is_split()) {
    if (factor.place.kind == PlaceKind::rational) {
      if (x.b() != 0) throw InputError("irrational element reduced at a rational place");
      return reduce(x.a(), factor.modulus);
    }
    throw Unsupported("residue map at inert or ramified places is not modeled");
  }
  const u64 m = factor.modulus;
  return add_mod(reduce(x.a(), m), mul_mod(reduce(x.b(), m), factor.lifted_root, m), m);
}

u64 residue_map(i64 x, const ResidueFactor& factor) {
  if (factor.place.kind == PlaceKind::inert || factor.place.kind == PlaceKind::ramified) {
    throw Unsupported("residue map at inert or ramified places is not modeled");
  }
  return reduce(x, factor.modulus);
}

std::vector<u64> crt_split(u64 x, const std::vector<u64>& moduli) {
  require_coprime(moduli);
  const u64 m = product_of(moduli);
  if (x >= m) throw InputError("residue out of range for the product modulus");
  std::vector<u64> out;
  out.reserve(moduli.size());
  for (u64 mi : moduli) out.push_back(x % mi);
  return out;
}

u64 crt_join(const std::vector<u64>& residues, const std::vector<u64>& moduli) {
  if (residues.size() != moduli.size()) throw InputError("residue and modulus lists differ in length");
  require_coprime(moduli);
  const u64 m = product_of(moduli);
  u64 x = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const u64 mi = moduli[i];
    if (residues[i] >= mi) throw InputError("residue out of range");
    const u64 rest = m / mi;
    const u64 coeff = mul_mod(residues[i], inv_mod(rest % mi, mi), mi);
    x = add_mod(x, mul_mod(coeff, rest, m), m);
  }
  return x;
}

std::vector<u64> crt_split(u64 x, const ResidueRing& ring) { return crt_split(x, ring.moduli()); }

u64 crt_join(const std::vector<u64>& residues, const ResidueRing& ring) {
  return crt_join(residues, ring.moduli());
}

}  // namespace profin
