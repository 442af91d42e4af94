#include "profin/matgroup.hpp"

#include "profin/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace profin {

void require_modulus(u64 modulus) {
  if (modulus < 2 || modulus >= kMaxModulus) {
    throw InputError("modulus must lie in [2, 2^31), got " + std::to_string(modulus));
  }
}

namespace raw {

namespace {

struct PrimePower {
  u64 p;
  unsigned e;
  u64 q;  // p^e
};

std::vector<PrimePower> factor_modulus(u64 m) {
  std::vector<PrimePower> out;
  for (u64 p : prime_divisors(m)) {
    PrimePower pp{p, 0, 1};
    while (m % p == 0) {
      m /= p;
      pp.q *= p;
      ++pp.e;
    }
    out.push_back(pp);
  }
  return out;
}

unsigned valuation(u64 x, const PrimePower& pp) {
  if (x == 0) return pp.e;
  unsigned v = 0;
  while (x % pp.p == 0) {
    x /= pp.p;
    ++v;
  }
  return v;
}

// Determinant over Z/p^e by elimination with a minimal-valuation pivot.
u64 det_prime_power(std::size_t n, const PrimePower& pp, std::span<const u64> a) {
  const u64 q = pp.q;
  Entries w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] % q;
  u64 det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    unsigned best_v = valuation(w[c * n + c], pp);
    for (std::size_t r = c + 1; r < n && best_v > 0; ++r) {
      unsigned v = valuation(w[r * n + c], pp);
      if (v < best_v) {
        best = r;
        best_v = v;
      }
    }
    if (best_v >= pp.e) return 0;
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w[c * n + j], w[best * n + j]);
      det = sub_mod(0, det, q);
    }
    const u64 pv = checked_pow(pp.p, best_v);
    const u64 pivot = w[c * n + c];
    const u64 unit_inv = inv_mod((pivot / pv) % q, q);
    det = mul_mod(det, pivot, q);
    for (std::size_t r = c + 1; r < n; ++r) {
      const u64 b = w[r * n + c];
      if (b == 0) continue;
      const u64 f = mul_mod(b / pv, unit_inv, q);
      for (std::size_t j = c; j < n; ++j) {
        w[r * n + j] = sub_mod(w[r * n + j], mul_mod(f, w[c * n + j], q), q);
      }
    }
  }
  return det;
}

// Gauss-Jordan over Z/p^e; a unit pivot exists in every column when det is a unit.
Entries inverse_prime_power(std::size_t n, const PrimePower& pp, std::span<const u64> a) {
  const u64 q = pp.q;
  Entries w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] % q;
  Entries inv = identity(n, q);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && w[r * n + c] % pp.p == 0) ++r;
    if (r == n) throw InputError("matrix is not invertible");
    if (r != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w[c * n + j], w[r * n + j]);
        std::swap(inv[c * n + j], inv[r * n + j]);
      }
    }
    const u64 s = inv_mod(w[c * n + c], q);
    for (std::size_t j = 0; j < n; ++j) {
      w[c * n + j] = mul_mod(w[c * n + j], s, q);
      inv[c * n + j] = mul_mod(inv[c * n + j], s, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const u64 f = w[i * n + c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w[i * n + j] = sub_mod(w[i * n + j], mul_mod(f, w[c * n + j], q), q);
        inv[i * n + j] = sub_mod(inv[i * n + j], mul_mod(f, inv[c * n + j], q), q);
      }
    }
  }
  return inv;
}

// Laplace expansion along the first row of the submatrix given by row/column lists.
u64 det_small(std::size_t n, u64 m, std::span<const u64> a, const std::vector<std::size_t>& rows,
              const std::vector<std::size_t>& cols) {
  const std::size_t k = rows.size();
  if (k == 1) return a[rows[0] * n + cols[0]] % m;
  if (k == 2) {
    return sub_mod(mul_mod(a[rows[0] * n + cols[0]], a[rows[1] * n + cols[1]], m),
                   mul_mod(a[rows[0] * n + cols[1]], a[rows[1] * n + cols[0]], m), m);
  }
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  u64 det = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const u64 entry = a[rows[0] * n + cols[c]];
    if (entry == 0) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != c) sub_cols.push_back(cols[j]);
    }
    const u64 term = mul_mod(entry, det_small(n, m, a, sub_rows, sub_cols), m);
    det = (c % 2 == 0) ? add_mod(det, term, m) : sub_mod(det, term, m);
  }
  return det;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != skip) out.push_back(i);
  }
  return out;
}

Entries combine_crt(std::size_t n, const std::vector<PrimePower>& pps,
                    const std::vector<Entries>& parts) {
  std::vector<u64> moduli;
  for (const auto& pp : pps) moduli.push_back(pp.q);
  Entries out(n * n);
  std::vector<u64> residues(pps.size());
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    for (std::size_t f = 0; f < pps.size(); ++f) residues[f] = parts[f][idx];
    out[idx] = moduli.size() == 1 ? residues[0] : crt_join(residues, moduli);
  }
  return out;
}

}  // namespace

Entries identity(std::size_t n, u64 m) {
  Entries out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = 1 % m;
  return out;
}

Entries mul(std::size_t n, u64 m, std::span<const u64> a, std::span<const u64> b) {
  Entries out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const u64 aik = a[i * n + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out[i * n + j] = (out[i * n + j] + aik * b[k * n + j]) % m;
      }
    }
  }
  return out;
}

Entries transpose(std::size_t n, std::span<const u64> a) {
  Entries out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * n + i] = a[i * n + j];
  }
  return out;
}

u64 det(std::size_t n, u64 m, std::span<const u64> a) {
  if (n <= 4) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return det_small(n, m, a, idx, idx);
  }
  const auto pps = factor_modulus(m);
  std::vector<u64> residues, moduli;
  for (const auto& pp : pps) {
    residues.push_back(det_prime_power(n, pp, a));
    moduli.push_back(pp.q);
  }
  return crt_join(residues, moduli);
}

Entries inverse(std::size_t n, u64 m, std::span<const u64> a) {
  if (n <= 4) {
    // adjugate / det
    const u64 d = det(n, m, a);
    const u64 d_inv = inv_mod(d, m);
    Entries out(n * n);
    if (n == 1) {
      out[0] = d_inv;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        // cofactor C_ji sits at (i, j) of the adjugate
        u64 minor = det_small(n, m, a, all_but(n, j), all_but(n, i));
        u64 cof = ((i + j) % 2 == 0) ? minor : sub_mod(0, minor, m);
        out[i * n + j] = mul_mod(cof, d_inv, m);
      }
    }
    return out;
  }
  const auto pps = factor_modulus(m);
  std::vector<Entries> parts;
  for (const auto& pp : pps) parts.push_back(inverse_prime_power(n, pp, a));
  return combine_crt(n, pps, parts);
}

}  // namespace raw

// ---------------------------------------------------------------------------

SLMat SLMat::identity(std::size_t n, u64 modulus) {
  require_modulus(modulus);
  if (n < 1) throw InputError("dimension must be positive");
  return SLMat(n, modulus, raw::identity(n, modulus));
}

SLMat SLMat::from_entries(std::size_t n, u64 modulus, std::span<const i64> entries) {
  require_modulus(modulus);
  if (entries.size() != n * n) throw InputError("expected n*n entries");
  raw::Entries e(n * n);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = reduce(entries[i], modulus);
  return from_reduced(n, modulus, std::move(e));
}

SLMat SLMat::from_entries(std::size_t n, u64 modulus, std::initializer_list<i64> entries) {
  return from_entries(n, modulus, std::span<const i64>(entries.begin(), entries.size()));
}

SLMat SLMat::from_reduced(std::size_t n, u64 modulus, raw::Entries entries) {
  require_modulus(modulus);
  if (n < 1) throw InputError("dimension must be positive");
  if (entries.size() != n * n) throw InputError("expected n*n entries");
  for (u64 x : entries) {
    if (x >= modulus) throw InputError("entry not reduced modulo " + std::to_string(modulus));
  }
  const u64 d = raw::det(n, modulus, entries);
  if (d != 1) {
    throw InputError("determinant is " + std::to_string(d) + ", not 1, modulo " + std::to_string(modulus));
  }
  return SLMat(n, modulus, std::move(entries));
}

bool SLMat::is_identity() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (entries_[i * n_ + j] != (i == j ? 1u : 0u)) return false;
    }
  }
  return true;
}

SLMat mat_mul(const SLMat& x, const SLMat& y) {
  if (x.n_ != y.n_ || x.modulus_ != y.modulus_) throw InputError("matrix shapes or rings differ");
  return SLMat(x.n_, x.modulus_, raw::mul(x.n_, x.modulus_, x.entries_, y.entries_));
}

SLMat mat_inv(const SLMat& x) { return SLMat(x.n_, x.modulus_, raw::inverse(x.n_, x.modulus_, x.entries_)); }

SLMat scale(const SLMat& x, u64 zeta) {
  zeta %= x.modulus_;
  if (pow_mod(zeta, x.n_, x.modulus_) != 1 % x.modulus_) {
    throw InputError("scalar " + std::to_string(zeta) + " is not an n-th root of unity");
  }
  raw::Entries e = x.entries_;
  for (u64& v : e) v = mul_mod(v, zeta, x.modulus_);
  return SLMat(x.n_, x.modulus_, std::move(e));
}

std::vector<SLMat> batch_mul(std::span<const SLMat> xs, std::span<const SLMat> ys) {
  if (xs.size() != ys.size()) throw InputError("batch operands differ in length");
  std::vector<SLMat> out;
  if (xs.empty()) return out;
  const std::size_t n = xs.front().n_;
  const u64 m = xs.front().modulus_;
  const std::size_t count = xs.size();
  std::vector<std::uint32_t> a(n * n * count), b(n * n * count), c(n * n * count);
  for (std::size_t k = 0; k < count; ++k) {
    if (xs[k].n_ != n || ys[k].n_ != n || xs[k].modulus_ != m || ys[k].modulus_ != m) {
      throw InputError("batch operands must share dimension and modulus");
    }
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      a[idx * count + k] = static_cast<std::uint32_t>(xs[k].entries_[idx]);
      b[idx * count + k] = static_cast<std::uint32_t>(ys[k].entries_[idx]);
    }
  }
  kernels::matmul_mod_batch(n, count, a, b, c, static_cast<std::uint32_t>(m));
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    raw::Entries e(n * n);
    for (std::size_t idx = 0; idx < n * n; ++idx) e[idx] = c[idx * count + k];
    out.push_back(SLMat(n, m, std::move(e)));
  }
  return out;
}

SLMat elementary(std::size_t n, std::size_t i, std::size_t j, i64 t, u64 modulus) {
  if (i == j) throw InputError("elementary matrix needs i != j");
  if (i >= n || j >= n) throw InputError("elementary matrix index out of range");
  SLMat id = SLMat::identity(n, modulus);
  raw::Entries e = id.entries();
  e[i * n + j] = reduce(t, modulus);
  return SLMat::from_reduced(n, modulus, std::move(e));
}

SLMat minus_identity(std::size_t n, u64 modulus) {
  if (n % 2 != 0) {
    throw InputError("-I has determinant -1 in odd dimension; use central_scalar for other roots of unity");
  }
  return scale(SLMat::identity(n, modulus), modulus - 1);
}

SLMat scalar_matrix(std::size_t n, u64 modulus, u64 zeta) { return scale(SLMat::identity(n, modulus), zeta); }

u64 canonical_root_of_unity(u64 p, unsigned e, u64 m) {
  if (m == 0 || (p - 1) % m != 0) {
    throw InputError("no element of order " + std::to_string(m) + " modulo " + std::to_string(p));
  }
  const u64 q = checked_pow(p, e);
  const u64 g = smallest_primitive_root(p, e);
  return pow_mod(g, phi_prime_power(p, e) / m, q);
}

SLMat central_scalar(std::size_t n, u64 p, unsigned e, u64 m) {
  if (!is_prime(p) || p == 2) throw InputError("central scalars need an odd prime");
  const u64 g = std::gcd(static_cast<u64>(n), p - 1);
  if (m == 0 || g % m != 0) {
    throw InputError("order " + std::to_string(m) + " does not divide gcd(n, p - 1) = " + std::to_string(g) +
                     "; no central element of that order");
  }
  return scalar_matrix(n, checked_pow(p, e), canonical_root_of_unity(p, e, m));
}

SLMat reduce_mod(const SLMat& x, u64 modulus) {
  if (x.modulus() % modulus != 0) throw InputError("target modulus must divide the source modulus");
  raw::Entries e = x.entries();
  for (u64& v : e) v %= modulus;
  return SLMat::from_reduced(x.n(), modulus, std::move(e));
}

std::vector<SLMat> crt_split(const SLMat& x, const std::vector<u64>& moduli) {
  u64 product = 1;
  for (u64 m : moduli) product *= m;
  if (product != x.modulus()) throw InputError("CRT moduli must multiply to the matrix modulus");
  std::vector<SLMat> out;
  for (u64 m : moduli) out.push_back(reduce_mod(x, m));
  return out;
}

SLMat crt_join(const std::vector<SLMat>& parts) {
  if (parts.empty()) throw InputError("nothing to join");
  const std::size_t n = parts.front().n();
  std::vector<u64> moduli;
  for (const auto& x : parts) {
    if (x.n() != n) throw InputError("dimension mismatch in CRT join");
    moduli.push_back(x.modulus());
  }
  u64 product = 1;
  for (u64 m : moduli) {
    if (__builtin_mul_overflow(product, m, &product)) throw std::overflow_error("modulus overflow");
  }
  require_modulus(product);
  raw::Entries e(n * n);
  std::vector<u64> residues(parts.size());
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    for (std::size_t f = 0; f < parts.size(); ++f) residues[f] = parts[f].entries()[idx];
    e[idx] = crt_join(residues, moduli);
  }
  return SLMat::from_reduced(n, product, std::move(e));
}

BigInt sl_order(std::size_t n, u64 p, unsigned e) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (e == 0 || n == 0) throw InputError("n and e must be positive");
  const BigInt bp = p;
  BigInt order = boost::multiprecision::pow(bp, static_cast<unsigned>((n * n - 1) * (e - 1) + n * (n - 1) / 2));
  for (std::size_t i = 2; i <= n; ++i) order *= boost::multiprecision::pow(bp, static_cast<unsigned>(i)) - 1;
  return order;
}

BigInt gl_order(std::size_t n, u64 p) {
  const BigInt bp = p;
  const BigInt pn = boost::multiprecision::pow(bp, static_cast<unsigned>(n));
  BigInt order = 1;
  for (std::size_t i = 0; i < n; ++i) order *= pn - boost::multiprecision::pow(bp, static_cast<unsigned>(i));
  return order;
}

std::size_t SLMatHash::operator()(const SLMat& x) const noexcept {
  std::size_t h = x.modulus() * 0x9E3779B97F4A7C15ULL;
  for (u64 v : x.entries()) h = (h ^ v) * 0x100000001B3ULL + (h >> 29);
  return h;
}

// ---------------------------------------------------------------------------

ProjPoint normalize(std::vector<u64> v, u64 p) {
  auto lead = std::find_if(v.begin(), v.end(), [p](u64 x) { return x % p != 0; });
  if (lead == v.end()) throw InputError("the zero vector spans no line");
  const u64 s = inv_mod(*lead % p, p);
  for (u64& x : v) x = mul_mod(x % p, s, p);
  return ProjPoint{std::move(v)};
}

std::size_t line_count(std::size_t n, u64 p) {
  std::size_t total = 0, pw = 1;
  for (std::size_t k = 0; k < n; ++k) {
    total += pw;
    pw *= p;
  }
  return total;
}

std::vector<ProjPoint> lines_of_projective_space(std::size_t n, u64 p) {
  if (!is_prime(p)) throw InputError("projective space needs a prime field");
  std::vector<ProjPoint> out;
  out.reserve(line_count(n, p));
  for (std::size_t lead = 0; lead < n; ++lead) {
    const std::size_t tail = n - 1 - lead;
    const u64 combos = checked_pow(p, static_cast<unsigned>(tail));
    for (u64 code = 0; code < combos; ++code) {
      std::vector<u64> v(n, 0);
      v[lead] = 1;
      u64 c = code;
      for (std::size_t k = n; k-- > lead + 1;) {
        v[k] = c % p;
        c /= p;
      }
      out.push_back(ProjPoint{std::move(v)});
    }
  }
  return out;
}

std::size_t line_index(const ProjPoint& line, u64 p) {
  const std::size_t n = line.coords.size();
  std::size_t lead = 0;
  while (lead < n && line.coords[lead] == 0) ++lead;
  if (lead == n || line.coords[lead] != 1) throw InputError("line is not normalized");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < lead; ++k) offset += checked_pow(p, static_cast<unsigned>(n - 1 - k));
  std::size_t code = 0;
  for (std::size_t k = lead + 1; k < n; ++k) code = code * p + line.coords[k];
  return offset + code;
}

ProjPoint act(const SLMat& g, const ProjPoint& line) {
  const std::size_t n = g.n();
  if (line.coords.size() != n) throw InputError("dimension mismatch in projective action");
  if (!is_prime(g.modulus())) throw InputError("projective action needs a matrix over a prime field");
  const u64 p = g.modulus();
  std::vector<u64> v(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    u64 s = 0;
    for (std::size_t j = 0; j < n; ++j) s = (s + g.at(i, j) * line.coords[j]) % p;
    v[i] = s;
  }
  return normalize(std::move(v), p);
}

}  // namespace profin
