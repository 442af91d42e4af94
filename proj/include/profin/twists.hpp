#pragma once

// Explicit isomorphisms between finite congruence quotients and the engine
// that checks them: membership of images, multiplicativity, round trips
// through the inverse, and equality of orders.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "profin/chevalley.hpp"
#include "profin/congruence.hpp"

namespace profin {

struct IdentityTwist {
  friend bool operator==(const IdentityTwist&, const IdentityTwist&) = default;
};

/// Moves the order-m central part of the `from` component onto `to`:
/// zeta^k at `from` becomes zeta'^k at `to`, zeta and zeta' the canonical
/// generators at each place (generator goes to generator).
struct CentralTransport {
  PrimePlace from;
  PrimePlace to;
  u64 m = 2;
  friend bool operator==(const CentralTransport&, const CentralTransport&) = default;
};

/// Exchanges the components at two places with equal moduli.
struct PlaceSwap {
  PrimePlace a;
  PrimePlace b;
  friend bool operator==(const PlaceSwap&, const PlaceSwap&) = default;
};

/// The graph automorphism (or its inverse) on one component.
struct GraphAutAtPlace {
  PrimePlace place;
  bool inverse = false;
  /// Fault injection: use a w0 of determinant -1.
  bool corrupt_w0 = false;
  friend bool operator==(const GraphAutAtPlace&, const GraphAutAtPlace&) = default;
};

using TwistKind = std::variant<IdentityTwist, CentralTransport, PlaceSwap, GraphAutAtPlace>;

std::string describe(const TwistKind& k);

/// apply() was handed something it cannot map: a non-member, a malformed
/// central part, or components whose moduli differ.
class TwistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuotientIso {
 public:
  using GroupPtr = std::shared_ptr<const FiniteQuotientGroup>;

  /// Source and target must share the ambient product; the places named by
  /// the kind must be in it. PlaceSwap moduli are checked only on apply so
  /// that a broken swap can still be built and refuted.
  QuotientIso(TwistKind kind, GroupPtr source, GroupPtr target);

  const TwistKind& kind() const noexcept { return kind_; }
  const FiniteQuotientGroup& source() const noexcept { return *source_; }
  const FiniteQuotientGroup& target() const noexcept { return *target_; }
  const GroupPtr& source_ptr() const noexcept { return source_; }
  const GroupPtr& target_ptr() const noexcept { return target_; }

  AmbientElement apply(const AmbientElement& g) const;
  /// Same map with the source membership test skipped; used where the input
  /// is known to be a member (products of members) or where the caller
  /// wants to see what the formula does to a non-member.
  AmbientElement apply_unchecked(const AmbientElement& g) const;
  QuotientIso invert() const;

  /// For CentralTransport: the exponent k with g_from = zeta^k mod p.
  std::optional<u64> central_exponent(const AmbientElement& g) const;
  /// For GraphAutAtPlace: the automorphism used at that place.
  const GraphAutomorphism* graph() const noexcept { return graph_ ? &*graph_ : nullptr; }

 private:
  TwistKind kind_;
  GroupPtr source_;
  GroupPtr target_;
  // CentralTransport: canonical powers at `from` and `to` over the full moduli
  std::vector<u64> from_powers_;
  std::vector<u64> to_powers_;
  std::size_t from_index_ = 0;
  std::size_t to_index_ = 0;
  std::optional<GraphAutomorphism> graph_;
};

QuotientIso invert(const QuotientIso& iso);

enum class Verdict { witnessed, refuted };
std::string to_string(Verdict v);

/// One failed check; `sample` is the pair index when the failure came from
/// a sampled pair.
struct Finding {
  std::string check;
  std::string detail;
  std::optional<u64> sample;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct IsoReport {
  u64 samples_used = 0;
  u64 generators_checked = 0;
  u64 homomorphism_failures = 0;
  u64 membership_failures = 0;
  u64 inverse_failures = 0;
  bool order_match = false;
  /// Every element of the source was checked, every pair for homomorphism.
  bool exhaustive = false;
  u64 exhaustive_elements = 0;
  /// First few failures: unsampled checks first, then by pair index.
  std::vector<Finding> findings;

  u64 total_failures() const noexcept { return homomorphism_failures + membership_failures + inverse_failures; }
  Verdict verdict() const noexcept {
    return total_failures() == 0 && order_match ? Verdict::witnessed : Verdict::refuted;
  }
  /// Counter sums and a bounded, index-ordered union of findings.
  void merge(const IsoReport& other);

  static constexpr std::size_t kMaxFindings = 8;
};

/// Quotients of at most this many elements are also checked exhaustively.
inline constexpr std::size_t kExhaustiveLimit = 512;

/// `workers` = 0 picks the hardware concurrency (capped at 8). The report
/// does not depend on the worker count.
IsoReport verify_iso(const QuotientIso& iso, u64 sample_count, u64 seed, unsigned workers = 0);

}  // namespace profin
