#pragma once

// The preset pairs of congruence subgroups with their declared twist, and
// the certificates that tell the two subgroups apart.
//
//   A    central elements of equal order moved from p to q
//   B    a parabolic at q replaced by its image under the diagram symmetry
//   C    a condition moved between the two split places over p
//   S16  the A-pattern for SL_2 at 3 and 5, the pair behind Gamma(15)

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "profin/congruence.hpp"
#include "profin/twists.hpp"

namespace profin {

enum class Method { A, B, C, S16 };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Parameters as given; fields a method does not use stay empty.
struct MethodParams {
  std::optional<std::size_t> n;
  std::optional<u64> p;
  std::optional<u64> q;
  std::optional<u64> m;
  std::optional<unsigned> e;
  std::optional<i64> d;
  friend bool operator==(const MethodParams&, const MethodParams&) = default;
};

struct WitnessBundle {
  Method method = Method::A;
  MethodParams params;
  SubgroupSpec spec1;
  SubgroupSpec spec2;
  Level level;
  TwistKind twist;

  /// The quotients of spec1 and spec2 at `level` and the twist between them.
  QuotientIso iso() const;
};

/// Central-element asymmetry (A, S16). presence[i][j]: does the i-th
/// quotient contain the central element of order m at the j-th place?
struct CentralCertificate {
  std::vector<PrimePlace> places;
  u64 m = 0;
  std::vector<std::vector<bool>> presence;
  bool holds = false;
};

struct ParabolicPrimeRow {
  u64 p = 0;
  std::size_t lines = 0;
  std::size_t fixed_theta = 0;
  std::size_t fixed_image = 0;
  BigInt order_theta;
  BigInt order_image;
};

/// Parabolic non-conjugacy (B): theta is moved by the diagram symmetry, the
/// two parabolics fix different numbers of lines, yet have equal orders.
struct ParabolicCertificate {
  std::vector<std::size_t> theta_blocks;
  std::vector<std::size_t> image_blocks;
  bool theta_invariant = true;
  std::vector<ParabolicPrimeRow> rows;
  u64 w0_determinant = 0;
  bool conditions_match = false;  // the specs carry theta / s(theta) where expected
  bool holds = false;
};

struct GaloisRow {
  PrimePlace place;
  PrimePlace image;
  std::optional<std::pair<u64, u64>> roots;  // square roots of d mod p
};

/// Place-orbit table (C): conjugation swaps the places over p and moves the
/// place over q that both subgroups constrain.
struct GaloisCertificate {
  i64 d = 0;
  std::vector<GaloisRow> rows;
  bool swaps_p = false;
  bool moves_q = false;
  bool involution = false;
  /// Both specs constrain the same place over q and different places over p.
  bool conditions_match = false;
  bool holds = false;
};

using Certificate = std::variant<CentralCertificate, ParabolicCertificate, GaloisCertificate>;

struct ObstructionReport {
  Method method = Method::A;
  Certificate certificate;
  /// In the first quotient, not in the second.
  AmbientElement separating_element;
  bool separating_in_first = false;
  bool separating_in_second = true;
  std::string twist_choice;
  std::vector<std::string> narrative;
  std::string claim_status;

  bool holds() const;
};

inline constexpr const char* kClaimStatus =
    "finite-level certificates computed; non-isomorphism of the arithmetic groups themselves is not machine "
    "checked and rests on rigidity given these certificates";

WitnessBundle method_a_pair(std::size_t n, u64 p, u64 q, u64 m, unsigned e);
WitnessBundle method_b_pair(u64 p, u64 q, unsigned e = 1);
WitnessBundle method_c_pair(i64 d, u64 p, u64 q, unsigned e = 1);
WitnessBundle s16_pair(u64 p, unsigned e = 1);

/// Recomputes every certificate value from the bundle's specs and level.
ObstructionReport obstruction_report(const WitnessBundle& bundle);

}  // namespace profin
