#pragma once

// Command-line front end. run_cli takes the arguments after the program
// name and returns the process exit code:
//   0  witnessed / every certificate holds
//   1  some check refuted
//   2  invalid input

#include <iosfwd>
#include <string>
#include <vector>

#include "profin/methods.hpp"
#include "profin/serialize.hpp"
#include "profin/twists.hpp"

namespace profin {

enum class Fault { none, place_swap, w0_sign };
Fault fault_from_string(const std::string& s);
std::string to_string(Fault f);

/// place_swap: replace the twist by a swap of the places over p and q.
/// w0_sign: corrupt the sign of w0 in a graph-automorphism twist.
void inject_fault(WitnessBundle& b, Fault f);

struct WitnessOutcome {
  IsoReport report;
  ObstructionReport obstruction;
  BigInt order1;
  BigInt order2;
  int exit_code = 1;
};

WitnessOutcome run_witness(const WitnessBundle& b, u64 samples, u64 seed, unsigned workers = 0);

/// The JSON document written by `witness` and `verify-iso`.
json witness_document(const std::string& schema, const json& config, const WitnessBundle& b,
                      const WitnessOutcome& outcome);

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Brute-force oracle checks followed by every preset witness.
std::vector<SelftestResult> run_selftest(u64 samples, Fault fault, unsigned workers = 0);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace profin
