#pragma once

// JSON encoding of the library's values. Objects are emitted with sorted
// keys and fixed indentation, so equal values give equal bytes. Orders are
// decimal strings (they outgrow 64 bits); matrices carry their modulus.
// Layout is described in docs/schema.md.

#include <string>

#include <json.hpp>

#include "profin/congruence.hpp"
#include "profin/methods.hpp"
#include "profin/twists.hpp"

namespace profin {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json encode(const SLMat& x);
json encode(const AmbientElement& x);
json encode(const PrimePlace& v);
json encode(const LocalCondition& c);
json encode(const SubgroupSpec& s);
json encode(const Level& level);
json encode(const TwistKind& t);
json encode(const MethodParams& p);
json encode(const WitnessBundle& b);
json encode(const IsoReport& r);
json encode(const ObstructionReport& r);

// Decoders validate as they go and throw InputError on malformed input.
SLMat decode_matrix(const json& j);
AmbientElement decode_ambient(const json& j);
PrimePlace decode_place(const json& j);
LocalCondition decode_condition(const json& j);
SubgroupSpec decode_spec(const json& j);
Level decode_level(const json& j);
TwistKind decode_twist(const json& j);
MethodParams decode_params(const json& j);
WitnessBundle decode_bundle(const json& j);

/// Canonical text: two-space indent, sorted keys, trailing newline.
std::string dump(const json& j);
/// Parses text, mapping parse errors to InputError.
json parse_json(const std::string& text);

}  // namespace profin
