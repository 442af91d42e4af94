#include "profin/congruence.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_set>

namespace profin {

unsigned condition_depth(const LocalCondition& c) {
  return std::visit(
      [](const auto& cond) -> unsigned {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) return 0;
        else if constexpr (std::is_same_v<T, ParabolicPullback>) return 1;
        else return cond.e;
      },
      c);
}

std::string describe(const LocalCondition& c) {
  return std::visit(
      [](const auto& cond) -> std::string {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) {
          return "full";
        } else if constexpr (std::is_same_v<T, Principal>) {
          return "principal(e=" + std::to_string(cond.e) + ")";
        } else if constexpr (std::is_same_v<T, CentralPrincipal>) {
          return "central_principal(m=" + std::to_string(cond.m) + ", e=" + std::to_string(cond.e) + ")";
        } else {
          std::string s = "parabolic_pullback(blocks=";
          bool first = true;
          for (std::size_t b : cond.theta.blocks()) {
            s += (first ? "" : ",") + std::to_string(b);
            first = false;
          }
          return s + ")";
        }
      },
      c);
}

// ---------------------------------------------------------------------------

SubgroupSpec SubgroupSpec::make(std::size_t n, i64 d, std::vector<std::pair<PrimePlace, LocalCondition>> conditions) {
  if (n < 2) throw InputError("SL_n needs n >= 2");
  if (d != 0 && (d < 2 || !is_squarefree(d))) throw InputError("base ring parameter must be 0 or squarefree >= 2");
  std::sort(conditions.begin(), conditions.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& [v, c] = conditions[i];
    if (i > 0 && conditions[i - 1].first == v) throw InputError("two conditions at place " + v.label);
    if (d == 0 && v.kind != PlaceKind::rational) throw InputError("non-rational place " + v.label + " over Z");
    if (d != 0 && !v.is_split()) throw InputError("place " + v.label + " is not split; only split places are modeled");
    if (const auto* cp = std::get_if<CentralPrincipal>(&c)) {
      const u64 g = std::gcd(static_cast<u64>(n), v.p - 1);
      if (cp->m == 0 || g % cp->m != 0) {
        throw InputError("central order " + std::to_string(cp->m) + " does not divide gcd(n, p - 1) = " +
                         std::to_string(g) + " at place " + v.label);
      }
    }
    if (const auto* pp = std::get_if<ParabolicPullback>(&c)) {
      if (pp->theta.n != n) throw InputError("parabolic condition has the wrong rank");
    }
    if (condition_depth(c) == 0 && !std::holds_alternative<Full>(c)) throw InputError("exponent must be >= 1");
  }
  return SubgroupSpec{n, d, std::move(conditions)};
}

const LocalCondition* SubgroupSpec::condition_at(const PrimePlace& v) const {
  for (const auto& [w, c] : conditions) {
    if (w == v) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

AmbientElement multiply(const AmbientElement& x, const AmbientElement& y) {
  if (x.size() != y.size()) throw InputError("ambient elements from different products");
  AmbientElement out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] * y[i]);
  return out;
}

AmbientElement invert(const AmbientElement& x) {
  AmbientElement out;
  out.reserve(x.size());
  for (const auto& g : x) out.push_back(mat_inv(g));
  return out;
}

bool is_identity(const AmbientElement& x) {
  return std::all_of(x.begin(), x.end(), [](const SLMat& g) { return g.is_identity(); });
}

namespace {

u64 splitmix64(u64 x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

u64 draw(std::mt19937_64& rng, u64 bound) { return rng() % bound; }

// Generators of ker(SL_n(Z/p^e) -> SL_n(Z/p^depth)).
std::vector<SLMat> kernel_generators(std::size_t n, u64 p, unsigned depth, unsigned e) {
  std::vector<SLMat> gens;
  if (depth >= e) return gens;
  const u64 q = checked_pow(p, e);
  const u64 step = checked_pow(p, depth);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) gens.push_back(elementary(n, i, j, static_cast<i64>(step), q));
    }
  }
  const u64 u = (1 + step) % q;
  const u64 u_inv = inv_mod(u, q);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    raw::Entries d = raw::identity(n, q);
    d[i * n + i] = u;
    d[(i + 1) * n + i + 1] = u_inv;
    gens.push_back(SLMat::from_reduced(n, q, std::move(d)));
  }
  return gens;
}

}  // namespace

u64 child_seed(u64 master, u64 index) {
  return splitmix64(splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL));
}

BigInt local_order(const LocalCondition& c, std::size_t n, u64 p, unsigned e) {
  const unsigned dim = static_cast<unsigned>(n * n - 1);
  auto kernel = [&](unsigned depth) -> BigInt {
    if (depth > e) throw InputError("level below condition depth");
    return boost::multiprecision::pow(BigInt(p), dim * (e - depth));
  };
  return std::visit(
      [&](const auto& cond) -> BigInt {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) return sl_order(n, p, e);
        else if constexpr (std::is_same_v<T, Principal>) return kernel(cond.e);
        else if constexpr (std::is_same_v<T, CentralPrincipal>) return BigInt(cond.m) * kernel(cond.e);
        else return parabolic_order(ParabolicSpec(p, cond.theta)) * kernel(1);
      },
      c);
}

// ---------------------------------------------------------------------------

FiniteQuotientGroup::FiniteQuotientGroup(SubgroupSpec spec, const Level& level_in) : spec_(std::move(spec)) {
  Level level = level_in;
  std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < level.size(); ++i) {
    if (level[i - 1].first == level[i].first) throw InputError("place listed twice in level");
  }
  for (const auto& [v, c] : spec_.conditions) {
    auto it = std::find_if(level.begin(), level.end(), [&](const auto& lv) { return lv.first == v; });
    if (it == level.end()) throw InputError("level does not cover condition place " + v.label);
    if (it->second < condition_depth(c)) {
      throw InputError("level " + std::to_string(it->second) + " at " + v.label + " is below condition depth " +
                       std::to_string(condition_depth(c)));
    }
  }
  order_ = 1;
  for (const auto& [v, e] : level) {
    if (e == 0) throw InputError("level exponents must be >= 1");
    if (spec_.d == 0 && v.kind != PlaceKind::rational) throw InputError("non-rational place in a level over Z");
    if (spec_.d != 0 && !v.is_split()) throw InputError("level place " + v.label + " is not split");
    LocalFactor f;
    f.place = v;
    f.exponent = e;
    f.modulus = checked_pow(v.p, e);
    require_modulus(f.modulus);
    const LocalCondition* c = spec_.condition_at(v);
    f.condition = c ? *c : LocalCondition{Full{}};
    if (const auto* cp = std::get_if<CentralPrincipal>(&f.condition)) {
      const u64 zeta = canonical_root_of_unity(v.p, e, cp->m);
      u64 z = 1;
      for (u64 k = 0; k < cp->m; ++k) {
        f.central_powers.push_back(z);
        z = mul_mod(z, zeta, f.modulus);
      }
    }
    order_ *= local_order(f.condition, spec_.n, v.p, e);
    factors_.push_back(std::move(f));
  }
  parabolic_words_.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (const auto* pp = std::get_if<ParabolicPullback>(&factors_[i].condition)) {
      parabolic_words_[i] = parabolic_generators(ParabolicSpec(factors_[i].place.p, pp->theta), factors_[i].exponent);
    }
    for (auto& g : local_generators(i)) {
      AmbientElement elem = identity();
      elem[i] = std::move(g);
      generators_.push_back(std::move(elem));
    }
  }
}

std::optional<std::size_t> FiniteQuotientGroup::index_of(const PrimePlace& v) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].place == v) return i;
  }
  return std::nullopt;
}

AmbientElement FiniteQuotientGroup::identity() const {
  AmbientElement out;
  for (const auto& f : factors_) out.push_back(SLMat::identity(spec_.n, f.modulus));
  return out;
}

std::vector<SLMat> FiniteQuotientGroup::local_generators(std::size_t i) const {
  const auto& f = factors_[i];
  const std::size_t n = spec_.n;
  const u64 p = f.place.p;
  return std::visit(
      [&](const auto& cond) -> std::vector<SLMat> {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) {
          return kernel_generators(n, p, 0, f.exponent);
        } else if constexpr (std::is_same_v<T, Principal>) {
          return kernel_generators(n, p, cond.e, f.exponent);
        } else if constexpr (std::is_same_v<T, CentralPrincipal>) {
          auto gens = kernel_generators(n, p, cond.e, f.exponent);
          if (cond.m > 1) gens.insert(gens.begin(), scalar_matrix(n, f.modulus, f.central_powers[1]));
          return gens;
        } else {
          auto gens = parabolic_words_[i];
          auto kernel = kernel_generators(n, p, 1, f.exponent);
          gens.insert(gens.end(), kernel.begin(), kernel.end());
          return gens;
        }
      },
      f.condition);
}

bool FiniteQuotientGroup::local_member(std::size_t i, const SLMat& g) const {
  const auto& f = factors_[i];
  if (g.n() != spec_.n || g.modulus() != f.modulus) return false;
  const std::size_t n = spec_.n;
  auto scalar_mod = [&](u64 q) -> std::optional<u64> {
    const u64 s = g.at(0, 0) % q;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (g.at(r, c) % q != (r == c ? s : 0)) return std::nullopt;
      }
    }
    return s;
  };
  return std::visit(
      [&](const auto& cond) -> bool {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) {
          return true;
        } else if constexpr (std::is_same_v<T, Principal>) {
          auto s = scalar_mod(checked_pow(f.place.p, cond.e));
          return s && *s == 1 % checked_pow(f.place.p, cond.e);
        } else if constexpr (std::is_same_v<T, CentralPrincipal>) {
          const u64 q = checked_pow(f.place.p, cond.e);
          auto s = scalar_mod(q);
          if (!s) return false;
          return std::any_of(f.central_powers.begin(), f.central_powers.end(),
                             [&](u64 z) { return z % q == *s; });
        } else {
          return in_parabolic(g, cond.theta, f.place.p);
        }
      },
      f.condition);
}

bool FiniteQuotientGroup::member(const AmbientElement& g) const {
  if (g.size() != factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!local_member(i, g[i])) return false;
  }
  return true;
}

SLMat FiniteQuotientGroup::sample_principal(std::size_t i, unsigned depth, std::mt19937_64& rng) const {
  const auto& f = factors_[i];
  const std::size_t n = spec_.n;
  if (depth >= f.exponent) return SLMat::identity(n, f.modulus);
  const u64 q = f.modulus;
  const u64 step = checked_pow(f.place.p, depth);
  const u64 span = q / step;
  raw::Entries m = raw::identity(n, q);
  for (u64& x : m) x = (x + step * draw(rng, span)) % q;
  // det is affine in entry (1,1) with slope the (1,1) cofactor, a unit here
  const u64 det = raw::det(n, q, m);
  raw::Entries minor((n - 1) * (n - 1));
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t c = 1; c < n; ++c) minor[(r - 1) * (n - 1) + c - 1] = m[r * n + c];
  }
  const u64 cof = n == 1 ? 1 : raw::det(n - 1, q, minor);
  m[0] = add_mod(m[0], mul_mod(sub_mod(1, det, q), inv_mod(cof, q), q), q);
  return SLMat::from_reduced(n, q, std::move(m));
}

SLMat FiniteQuotientGroup::sample_local(std::size_t i, std::mt19937_64& rng) const {
  constexpr int kWordLength = 32;
  const auto& f = factors_[i];
  const std::size_t n = spec_.n;
  return std::visit(
      [&](const auto& cond) -> SLMat {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) {
          SLMat g = SLMat::identity(n, f.modulus);
          for (int k = 0; k < kWordLength; ++k) {
            const std::size_t r = draw(rng, n);
            std::size_t c = draw(rng, n - 1);
            if (c >= r) ++c;
            g = g * elementary(n, r, c, static_cast<i64>(draw(rng, f.modulus)), f.modulus);
          }
          return g;
        } else if constexpr (std::is_same_v<T, Principal>) {
          return sample_principal(i, cond.e, rng);
        } else if constexpr (std::is_same_v<T, CentralPrincipal>) {
          const u64 zeta = f.central_powers[draw(rng, cond.m)];
          return scale(sample_principal(i, cond.e, rng), zeta);
        } else {
          const auto& words = parabolic_words_[i];
          SLMat g = SLMat::identity(n, f.modulus);
          for (int k = 0; k < kWordLength; ++k) g = g * words[draw(rng, words.size())];
          return g * sample_principal(i, 1, rng);
        }
      },
      f.condition);
}

AmbientElement FiniteQuotientGroup::sample(u64 seed) const {
  std::mt19937_64 rng(seed);
  AmbientElement out;
  out.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(sample_local(i, rng));
  return out;
}

AmbientElement FiniteQuotientGroup::central_element(const PrimePlace& v, u64 m) const {
  auto idx = index_of(v);
  if (!idx) throw InputError("place " + v.label + " is not in the level");
  AmbientElement out = identity();
  out[*idx] = central_scalar(spec_.n, v.p, factors_[*idx].exponent, m);
  return out;
}

bool FiniteQuotientGroup::central_presence(const PrimePlace& v, u64 m) const {
  return member(central_element(v, m));
}

AmbientElement FiniteQuotientGroup::reduce_global(std::span<const QuadInt> entries) const {
  const std::size_t n = spec_.n;
  if (entries.size() != n * n) throw InputError("expected n*n entries");
  if (spec_.d == 0) throw InputError("quadratic entries over the rational ring");
  Level level;
  for (const auto& f : factors_) level.emplace_back(f.place, f.exponent);
  ResidueRing ring(spec_.d, level);
  AmbientElement out;
  for (const auto& rf : ring.factors()) {
    raw::Entries e(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      if (entries[k].d() != spec_.d) throw InputError("entry from a different quadratic ring");
      e[k] = residue_map(entries[k], rf);
    }
    out.push_back(SLMat::from_reduced(n, rf.modulus, std::move(e)));
  }
  return out;
}

AmbientElement FiniteQuotientGroup::reduce_global(std::span<const i64> entries) const {
  const std::size_t n = spec_.n;
  if (entries.size() != n * n) throw InputError("expected n*n entries");
  AmbientElement out;
  for (const auto& f : factors_) out.push_back(SLMat::from_entries(n, f.modulus, entries));
  return out;
}

bool FiniteQuotientGroup::same_ambient(const FiniteQuotientGroup& other) const {
  if (spec_.n != other.spec_.n || spec_.d != other.spec_.d || factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!(factors_[i].place == other.factors_[i].place) || factors_[i].exponent != other.factors_[i].exponent) {
      return false;
    }
  }
  return true;
}

FiniteQuotientGroup quotient_of(const SubgroupSpec& spec, const Level& level) {
  return FiniteQuotientGroup(spec, level);
}

// ---------------------------------------------------------------------------

namespace {

struct AmbientHash {
  std::size_t operator()(const AmbientElement& x) const noexcept {
    std::size_t h = 0;
    SLMatHash hm;
    for (const auto& g : x) h = h * 0x100000001B3ULL ^ hm(g);
    return h;
  }
};

template <typename Elem, typename Hash, typename Mul>
std::optional<std::vector<Elem>> closure(const Elem& identity, const std::vector<Elem>& gens, std::size_t limit,
                                         Mul mul) {
  std::unordered_set<Elem, Hash> seen{identity};
  std::vector<Elem> order{identity};
  std::deque<Elem> frontier{identity};
  while (!frontier.empty()) {
    Elem x = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      Elem y = mul(x, g);
      if (seen.insert(y).second) {
        if (seen.size() > limit) return std::nullopt;
        order.push_back(y);
        frontier.push_back(std::move(y));
      }
    }
  }
  return order;
}

}  // namespace

std::optional<std::vector<AmbientElement>> enumerate_group(const FiniteQuotientGroup& q, std::size_t limit) {
  return closure<AmbientElement, AmbientHash>(q.identity(), q.generators(), limit,
                                              [](const AmbientElement& x, const AmbientElement& y) {
                                                return multiply(x, y);
                                              });
}

std::optional<std::size_t> closure_order(const std::vector<SLMat>& gens, std::size_t limit) {
  if (gens.empty()) return 1;
  auto all = closure<SLMat, SLMatHash>(SLMat::identity(gens.front().n(), gens.front().modulus()), gens, limit,
                                       [](const SLMat& x, const SLMat& y) { return x * y; });
  if (!all) return std::nullopt;
  return all->size();
}

}  // namespace profin
