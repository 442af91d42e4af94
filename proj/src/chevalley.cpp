#include "profin/chevalley.hpp"

#include <string>

#include "profin/kernels.hpp"

namespace profin {

RootSubset::RootSubset(std::size_t n_, std::set<std::size_t> roots_) : n(n_), roots(std::move(roots_)) {
  if (n < 2) throw InputError("SL_n needs n >= 2");
  for (std::size_t r : roots) {
    if (r < 1 || r >= n) throw InputError("simple root index " + std::to_string(r) + " outside 1.." + std::to_string(n - 1));
  }
}

RootSubset RootSubset::full(std::size_t n) {
  std::set<std::size_t> all;
  for (std::size_t i = 1; i < n; ++i) all.insert(i);
  return RootSubset(n, std::move(all));
}

RootSubset RootSubset::from_blocks(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  std::set<std::size_t> boundaries;
  for (std::size_t b : sizes) {
    if (b == 0) throw InputError("block sizes must be positive");
    n += b;
    boundaries.insert(n);
  }
  boundaries.erase(n);
  std::set<std::size_t> roots;
  for (std::size_t i = 1; i < n; ++i) {
    if (!boundaries.count(i)) roots.insert(i);
  }
  return RootSubset(n, std::move(roots));
}

std::vector<std::size_t> RootSubset::blocks() const {
  std::vector<std::size_t> out;
  std::size_t current = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (roots.count(i)) {
      ++current;
    } else {
      out.push_back(current);
      current = 1;
    }
  }
  out.push_back(current);
  return out;
}

RootSubset RootSubset::dynkin_image() const {
  std::set<std::size_t> image;
  for (std::size_t r : roots) image.insert(n - r);
  return RootSubset(n, std::move(image));
}

ParabolicSpec::ParabolicSpec(u64 p_, RootSubset theta_) : n(theta_.n), p(p_), theta(std::move(theta_)) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
}

namespace {

std::vector<std::size_t> block_ids(const RootSubset& theta) {
  std::vector<std::size_t> ids;
  std::size_t id = 0;
  for (std::size_t b : theta.blocks()) {
    for (std::size_t k = 0; k < b; ++k) ids.push_back(id);
    ++id;
  }
  return ids;
}

}  // namespace

bool in_parabolic(const SLMat& g, const RootSubset& theta, u64 p) {
  if (g.n() != theta.n) throw InputError("dimension mismatch in parabolic membership");
  const auto ids = block_ids(theta);
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) {
      if (ids[i] > ids[j] && g.at(i, j) % p != 0) return false;
    }
  }
  return true;
}

bool parabolic_membership(const SLMat& g, const ParabolicSpec& P) {
  if (g.modulus() != P.p) throw InputError("parabolic membership expects a matrix over F_p");
  return in_parabolic(g, P.theta, P.p);
}

BigInt parabolic_order(const ParabolicSpec& P) {
  const auto sizes = P.theta.blocks();
  std::size_t upper = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = i + 1; j < sizes.size(); ++j) upper += sizes[i] * sizes[j];
  }
  BigInt order = boost::multiprecision::pow(BigInt(P.p), static_cast<unsigned>(upper));
  for (std::size_t b : sizes) order *= gl_order(b, P.p);
  return order / (P.p - 1);
}

std::vector<SLMat> parabolic_generators(const ParabolicSpec& P, unsigned e) {
  const std::size_t n = P.n;
  const u64 modulus = checked_pow(P.p, e);
  const auto ids = block_ids(P.theta);
  std::vector<SLMat> gens;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < j || ids[i] == ids[j]) gens.push_back(elementary(n, i, j, 1, modulus));
    }
  }
  if (P.p == 2) return gens;  // the torus of SL_n(F_2) is trivial
  const u64 r = canonical_root_of_unity(P.p, e, P.p - 1);
  const u64 r_inv = inv_mod(r, modulus);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || ids[i] != ids[i - 1]) starts.push_back(i);
  }
  for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
    raw::Entries d = raw::identity(n, modulus);
    d[starts[b] * n + starts[b]] = r;
    d[starts[b + 1] * n + starts[b + 1]] = r_inv;
    gens.push_back(SLMat::from_reduced(n, modulus, std::move(d)));
  }
  return gens;
}

// ---------------------------------------------------------------------------

GraphAutomorphism::GraphAutomorphism(std::size_t n, u64 modulus, bool corrupt_sign)
    : n_(n), modulus_(modulus), w0_(n * n, 0) {
  require_modulus(modulus);
  if (n < 2) throw InputError("graph automorphism needs n >= 2");
  for (std::size_t i = 0; i < n; ++i) w0_[i * n + (n - 1 - i)] = 1;
  const bool odd_reversal = (n * (n - 1) / 2) % 2 == 1;
  if (odd_reversal != corrupt_sign) w0_[n - 1] = modulus - 1;
  w0_inv_ = raw::inverse(n, modulus, w0_);
}

u64 GraphAutomorphism::w0_determinant() const { return raw::det(n_, modulus_, w0_); }

SLMat GraphAutomorphism::operator()(const SLMat& g) const {
  if (g.n() != n_ || g.modulus() != modulus_) throw InputError("graph automorphism applied in the wrong group");
  const raw::Entries inv_t = raw::transpose(n_, mat_inv(g).entries());
  raw::Entries out = raw::mul(n_, modulus_, raw::mul(n_, modulus_, w0_, inv_t), w0_inv_);
  return SLMat::from_reduced(n_, modulus_, std::move(out));
}

SLMat GraphAutomorphism::inverse(const SLMat& h) const {
  if (h.n() != n_ || h.modulus() != modulus_) throw InputError("graph automorphism applied in the wrong group");
  // g^{-T} = w0^{-1} h w0, so g = (w0^{-1} h w0)^{-T}
  const raw::Entries inner = raw::mul(n_, modulus_, raw::mul(n_, modulus_, w0_inv_, h.entries()), w0_);
  raw::Entries out = raw::transpose(n_, raw::inverse(n_, modulus_, inner));
  return SLMat::from_reduced(n_, modulus_, std::move(out));
}

raw::Entries GraphAutomorphism::square_conjugator() const {
  return raw::mul(n_, modulus_, w0_, raw::inverse(n_, modulus_, raw::transpose(n_, w0_)));
}

SLMat graph_automorphism(const SLMat& g) { return GraphAutomorphism(g.n(), g.modulus())(g); }

// ---------------------------------------------------------------------------

std::size_t fixed_lines(std::span<const SLMat> gens, std::size_t n, u64 p) {
  const auto lines = lines_of_projective_space(n, p);
  const std::size_t count = lines.size();
  std::vector<std::uint32_t> soa(n * count), image(n * count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) soa[i * count + k] = static_cast<std::uint32_t>(lines[k].coords[i]);
  }
  std::vector<char> fixed(count, 1);
  std::vector<std::uint32_t> g32(n * n);
  for (const SLMat& g : gens) {
    if (g.n() != n || g.modulus() != p) throw InputError("fixed_lines expects generators over F_p");
    for (std::size_t idx = 0; idx < n * n; ++idx) g32[idx] = static_cast<std::uint32_t>(g.entries()[idx]);
    kernels::matvec_mod_batch(n, count, g32, soa, image, static_cast<std::uint32_t>(p));
    for (std::size_t k = 0; k < count; ++k) {
      if (!fixed[k]) continue;
      // g v spans the same line iff it is a multiple of v: compare after scaling
      // by the inverse of its leading coordinate at v's leading position.
      std::size_t lead = 0;
      while (lines[k].coords[lead] == 0) ++lead;
      const u64 s = image[lead * count + k];
      bool same = s != 0;
      for (std::size_t i = 0; same && i < n; ++i) {
        same = image[i * count + k] == mul_mod(s, lines[k].coords[i], p);
      }
      fixed[k] = same;
    }
  }
  std::size_t total = 0;
  for (char f : fixed) total += f ? 1 : 0;
  return total;
}

std::size_t fixed_lines(const ParabolicSpec& P) {
  const auto gens = parabolic_generators(P, 1);
  return fixed_lines(gens, P.n, P.p);
}

}  // namespace profin
