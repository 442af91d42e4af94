#include "profin/twists.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

namespace profin {

std::string describe(const TwistKind& k) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IdentityTwist>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, CentralTransport>) {
          return "central_transport(" + t.from.label + " -> " + t.to.label + ", m=" + std::to_string(t.m) + ")";
        } else if constexpr (std::is_same_v<T, PlaceSwap>) {
          return "place_swap(" + t.a.label + " <-> " + t.b.label + ")";
        } else {
          std::string s = "graph_automorphism(" + t.place.label;
          if (t.inverse) s += ", inverse";
          if (t.corrupt_w0) s += ", corrupted w0";
          return s + ")";
        }
      },
      k);
}

std::string to_string(Verdict v) { return v == Verdict::witnessed ? "witnessed" : "refuted"; }

namespace {

std::size_t require_index(const FiniteQuotientGroup& g, const PrimePlace& v) {
  auto idx = g.index_of(v);
  if (!idx) throw InputError("place " + v.label + " is not in the quotient's level");
  return *idx;
}

std::vector<u64> canonical_powers(u64 p, unsigned e, u64 m, u64 modulus) {
  const u64 zeta = canonical_root_of_unity(p, e, m);
  std::vector<u64> out;
  u64 z = 1;
  for (u64 k = 0; k < m; ++k) {
    out.push_back(z);
    z = mul_mod(z, zeta, modulus);
  }
  return out;
}

}  // namespace

QuotientIso::QuotientIso(TwistKind kind, GroupPtr source, GroupPtr target)
    : kind_(std::move(kind)), source_(std::move(source)), target_(std::move(target)) {
  if (!source_ || !target_) throw InputError("isomorphism needs both groups");
  if (!source_->same_ambient(*target_)) throw InputError("source and target live in different ambient products");
  const std::size_t n = source_->n();
  if (const auto* ct = std::get_if<CentralTransport>(&kind_)) {
    if (ct->from == ct->to) throw InputError("central transport needs two distinct places");
    from_index_ = require_index(*source_, ct->from);
    to_index_ = require_index(*source_, ct->to);
    for (const PrimePlace* v : {&ct->from, &ct->to}) {
      const u64 g = std::gcd(static_cast<u64>(n), v->p - 1);
      if (ct->m == 0 || g % ct->m != 0) {
        throw InputError("central order " + std::to_string(ct->m) + " does not divide gcd(n, p - 1) = " +
                         std::to_string(g) + " at " + v->label);
      }
    }
    const auto& ff = source_->factors()[from_index_];
    const auto& tf = source_->factors()[to_index_];
    from_powers_ = canonical_powers(ff.place.p, ff.exponent, ct->m, ff.modulus);
    to_powers_ = canonical_powers(tf.place.p, tf.exponent, ct->m, tf.modulus);
  } else if (const auto* ps = std::get_if<PlaceSwap>(&kind_)) {
    if (ps->a == ps->b) throw InputError("place swap needs two distinct places");
    from_index_ = require_index(*source_, ps->a);
    to_index_ = require_index(*source_, ps->b);
  } else if (const auto* ga = std::get_if<GraphAutAtPlace>(&kind_)) {
    from_index_ = require_index(*source_, ga->place);
    graph_.emplace(n, source_->factors()[from_index_].modulus, ga->corrupt_w0);
  }
}

std::optional<u64> QuotientIso::central_exponent(const AmbientElement& g) const {
  if (!std::holds_alternative<CentralTransport>(kind_)) return std::nullopt;
  const SLMat& x = g.at(from_index_);
  const u64 p = source_->factors()[from_index_].place.p;
  const u64 s = x.at(0, 0) % p;
  for (std::size_t r = 0; r < x.n(); ++r) {
    for (std::size_t c = 0; c < x.n(); ++c) {
      if (x.at(r, c) % p != (r == c ? s : 0)) return std::nullopt;
    }
  }
  for (u64 k = 0; k < from_powers_.size(); ++k) {
    if (from_powers_[k] % p == s) return k;
  }
  return std::nullopt;
}

AmbientElement QuotientIso::apply_unchecked(const AmbientElement& g) const {
  if (g.size() != source_->factors().size()) throw TwistError("element has the wrong number of components");
  AmbientElement out = g;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, CentralTransport>) {
          auto k = central_exponent(g);
          if (!k) {
            throw TwistError("component at " + t.from.label +
                             " has no central part in the canonical subgroup of order " + std::to_string(t.m));
          }
          out[from_index_] = scale(g[from_index_], from_powers_[(t.m - *k) % t.m]);
          out[to_index_] = scale(g[to_index_], to_powers_[*k]);
        } else if constexpr (std::is_same_v<T, PlaceSwap>) {
          if (g[from_index_].modulus() != g[to_index_].modulus()) {
            throw TwistError("cannot swap " + t.a.label + " and " + t.b.label + ": moduli " +
                             std::to_string(g[from_index_].modulus()) + " and " +
                             std::to_string(g[to_index_].modulus()) + " differ");
          }
          std::swap(out[from_index_], out[to_index_]);
        } else if constexpr (std::is_same_v<T, GraphAutAtPlace>) {
          out[from_index_] = t.inverse ? graph_->inverse(g[from_index_]) : (*graph_)(g[from_index_]);
        }
      },
      kind_);
  return out;
}

AmbientElement QuotientIso::apply(const AmbientElement& g) const {
  if (!source_->member(g)) throw TwistError("input is not a member of the source quotient");
  return apply_unchecked(g);
}

QuotientIso QuotientIso::invert() const {
  TwistKind inv = std::visit(
      [](const auto& t) -> TwistKind {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, CentralTransport>) {
          return CentralTransport{t.to, t.from, t.m};
        } else if constexpr (std::is_same_v<T, GraphAutAtPlace>) {
          return GraphAutAtPlace{t.place, !t.inverse, t.corrupt_w0};
        } else {
          return t;
        }
      },
      kind_);
  return QuotientIso(std::move(inv), target_, source_);
}

QuotientIso invert(const QuotientIso& iso) { return iso.invert(); }

// ---------------------------------------------------------------------------

void IsoReport::merge(const IsoReport& other) {
  samples_used += other.samples_used;
  generators_checked += other.generators_checked;
  homomorphism_failures += other.homomorphism_failures;
  membership_failures += other.membership_failures;
  inverse_failures += other.inverse_failures;
  exhaustive_elements += other.exhaustive_elements;
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& x, const Finding& y) {
    if (x.sample.has_value() != y.sample.has_value()) return !x.sample.has_value();
    return x.sample.value_or(0) < y.sample.value_or(0);
  });
  if (findings.size() > kMaxFindings) findings.resize(kMaxFindings);
}

namespace {

void note(IsoReport& r, std::string check, std::string detail, std::optional<u64> sample = std::nullopt) {
  if (r.findings.size() < IsoReport::kMaxFindings) r.findings.push_back({std::move(check), std::move(detail), sample});
}

std::string first_bad_place(const FiniteQuotientGroup& g, const AmbientElement& x) {
  for (std::size_t i = 0; i < g.factors().size(); ++i) {
    if (!g.local_member(i, x.at(i))) return g.factors()[i].place.label;
  }
  return "?";
}

// Componentwise products of two equally shaped lists, one kernel call per place.
std::vector<AmbientElement> batch_multiply(const std::vector<AmbientElement>& xs,
                                           const std::vector<AmbientElement>& ys) {
  std::vector<AmbientElement> out(xs.size());
  if (xs.empty()) return out;
  const std::size_t places = xs.front().size();
  std::vector<SLMat> a, b;
  for (std::size_t i = 0; i < places; ++i) {
    a.clear();
    b.clear();
    for (std::size_t k = 0; k < xs.size(); ++k) {
      a.push_back(xs[k][i]);
      b.push_back(ys[k][i]);
    }
    auto prod = batch_mul(a, b);
    for (std::size_t k = 0; k < xs.size(); ++k) out[k].push_back(std::move(prod[k]));
  }
  return out;
}

void check_generators(const QuotientIso& iso, const QuotientIso& inv, IsoReport& r) {
  const auto& src = iso.source();
  const auto& tgt = iso.target();
  try {
    if (iso.apply_unchecked(src.identity()) != tgt.identity()) {
      ++r.membership_failures;
      note(r, "identity", "the identity does not map to the identity");
    }
  } catch (const TwistError& e) {
    ++r.membership_failures;
    note(r, "identity", e.what());
  }
  auto run = [&](const QuotientIso& map, const FiniteQuotientGroup& from, const FiniteQuotientGroup& to,
                 const char* label) {
    const auto& gens = from.generators();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      ++r.generators_checked;
      try {
        const auto img = map.apply(gens[j]);
        if (!to.member(img)) {
          ++r.membership_failures;
          note(r, std::string(label) + " generator image",
               "generator " + std::to_string(j) + " leaves the image group at " + first_bad_place(to, img));
        }
      } catch (const TwistError& e) {
        ++r.membership_failures;
        note(r, std::string(label) + " generator image", e.what());
      }
    }
  };
  run(iso, src, tgt, "source");
  run(inv, tgt, src, "target");

  // The graph twist must come from conjugation by an element of SL_n, so
  // its Weyl representative w0 has to have determinant one.
  if (const auto* g = iso.graph()) {
    const u64 det = g->w0_determinant();
    if (det != 1 % g->modulus()) {
      ++r.membership_failures;
      note(r, "graph-automorphism determinant check",
           "det(w0) = " + std::to_string(det) + " mod " + std::to_string(g->modulus()) + ", so w0 is not in SL_" +
               std::to_string(g->n()));
    }
  }
}

// Pairs [lo, hi) of the sampled checks.
IsoReport check_range(const QuotientIso& iso, const QuotientIso& inv, u64 seed, u64 lo, u64 hi) {
  constexpr u64 kBatch = 256;
  IsoReport r;
  const auto& src = iso.source();
  const auto& tgt = iso.target();
  for (u64 start = lo; start < hi; start += kBatch) {
    const u64 stop = std::min(hi, start + kBatch);
    std::vector<AmbientElement> xs, ys;
    for (u64 i = start; i < stop; ++i) {
      xs.push_back(src.sample(child_seed(seed, 2 * i)));
      ys.push_back(src.sample(child_seed(seed, 2 * i + 1)));
    }
    const auto xys = batch_multiply(xs, ys);

    std::vector<AmbientElement> fx, fy, fxy;
    std::vector<u64> ok;  // positions whose three images all exist
    for (u64 k = 0; k < xs.size(); ++k) {
      const u64 i = start + k;
      ++r.samples_used;
      if (!src.member(xs[k]) || !src.member(ys[k])) {
        ++r.membership_failures;
        note(r, "source sample", "sampler produced a non-member", i);
        continue;
      }
      try {
        AmbientElement a = iso.apply_unchecked(xs[k]);
        AmbientElement b = iso.apply_unchecked(ys[k]);
        AmbientElement c = iso.apply_unchecked(xys[k]);
        if (!tgt.member(a) || !tgt.member(b)) {
          ++r.membership_failures;
          note(r, "image membership",
               "image leaves the target at " + first_bad_place(tgt, tgt.member(a) ? b : a), i);
          continue;
        }
        fx.push_back(std::move(a));
        fy.push_back(std::move(b));
        fxy.push_back(std::move(c));
        ok.push_back(k);
      } catch (const TwistError& e) {
        ++r.membership_failures;
        note(r, "image membership", e.what(), i);
      }
    }

    const auto products = batch_multiply(fx, fy);
    for (std::size_t j = 0; j < ok.size(); ++j) {
      const u64 i = start + ok[j];
      if (products[j] != fxy[j]) {
        ++r.homomorphism_failures;
        note(r, "homomorphism", "f(xy) != f(x) f(y)", i);
      }
      try {
        if (inv.apply_unchecked(fx[j]) != xs[ok[j]]) {
          ++r.inverse_failures;
          note(r, "inverse round trip", "f^-1(f(x)) != x", i);
        }
      } catch (const TwistError& e) {
        ++r.inverse_failures;
        note(r, "inverse round trip", e.what(), i);
      }
    }
  }
  return r;
}

void check_exhaustive(const QuotientIso& iso, const QuotientIso& inv, IsoReport& r) {
  const auto& src = iso.source();
  const auto& tgt = iso.target();
  auto all = enumerate_group(src, kExhaustiveLimit);
  if (!all) return;
  r.exhaustive = true;
  r.exhaustive_elements = all->size();
  if (BigInt(all->size()) != src.order()) {
    r.order_match = false;
    note(r, "exhaustive order", "enumerated " + std::to_string(all->size()) + " elements, formula says " +
                                    src.order().str());
  }
  std::vector<AmbientElement> images;
  for (const auto& x : *all) {
    try {
      AmbientElement fx = iso.apply(x);
      if (!tgt.member(fx)) {
        ++r.membership_failures;
        note(r, "exhaustive membership", "image leaves the target at " + first_bad_place(tgt, fx));
        continue;
      }
      if (inv.apply_unchecked(fx) != x) {
        ++r.inverse_failures;
        note(r, "exhaustive round trip", "f^-1(f(x)) != x");
      }
      images.push_back(std::move(fx));
    } catch (const TwistError& e) {
      ++r.membership_failures;
      note(r, "exhaustive membership", e.what());
    }
  }
  if (images.size() != all->size()) return;
  for (std::size_t i = 0; i < all->size(); ++i) {
    for (std::size_t j = 0; j < all->size(); ++j) {
      if (iso.apply_unchecked(multiply((*all)[i], (*all)[j])) != multiply(images[i], images[j])) {
        ++r.homomorphism_failures;
        note(r, "exhaustive homomorphism", "f(xy) != f(x) f(y) for elements " + std::to_string(i) + ", " +
                                               std::to_string(j));
      }
    }
  }
}

}  // namespace

IsoReport verify_iso(const QuotientIso& iso, u64 sample_count, u64 seed, unsigned workers) {
  if (sample_count == 0) throw InputError("sample count must be at least 1");
  const QuotientIso inv = iso.invert();

  IsoReport report;
  report.order_match = iso.source().order() == iso.target().order();
  if (!report.order_match) {
    note(report, "order", "source order " + iso.source().order().str() + " != target order " +
                              iso.target().order().str());
  }
  check_generators(iso, inv, report);

  if (workers == 0) workers = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
  const u64 chunks = std::min<u64>(workers, sample_count);
  std::vector<IsoReport> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  for (u64 c = 0; c < chunks; ++c) {
    const u64 lo = sample_count * c / chunks, hi = sample_count * (c + 1) / chunks;
    pool.emplace_back([&, c, lo, hi] {
      try {
        parts[c] = check_range(iso, inv, seed, lo, hi);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& part : parts) report.merge(part);

  if (iso.source().order() <= kExhaustiveLimit && iso.target().order() <= kExhaustiveLimit) {
    IsoReport ex;
    ex.order_match = report.order_match;
    check_exhaustive(iso, inv, ex);
    report.exhaustive = ex.exhaustive;
    report.order_match = ex.order_match;
    report.merge(ex);
  }
  return report;
}

}  // namespace profin
