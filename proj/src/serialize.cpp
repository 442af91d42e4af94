#include "profin/serialize.hpp"

namespace profin {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

json encode_places(const std::vector<PrimePlace>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(encode(v));
  return out;
}

json encode_blocks(const RootSubset& t) { return t.blocks(); }

}  // namespace

json encode(const SLMat& x) {
  return json{{"modulus", x.modulus()}, {"n", x.n()}, {"entries", x.entries()}};
}

json encode(const AmbientElement& x) {
  json out = json::array();
  for (const auto& g : x) out.push_back(encode(g));
  return out;
}

json encode(const PrimePlace& v) {
  json out{{"p", v.p}, {"kind", to_string(v.kind)}, {"label", v.label}};
  out["root"] = v.root ? json(*v.root) : json(nullptr);
  return out;
}

json encode(const LocalCondition& c) {
  return std::visit(
      [](const auto& cond) -> json {
        using T = std::decay_t<decltype(cond)>;
        if constexpr (std::is_same_v<T, Full>) return json{{"type", "full"}};
        else if constexpr (std::is_same_v<T, Principal>) return json{{"type", "principal"}, {"e", cond.e}};
        else if constexpr (std::is_same_v<T, CentralPrincipal>)
          return json{{"type", "central_principal"}, {"m", cond.m}, {"e", cond.e}};
        else return json{{"type", "parabolic_pullback"}, {"blocks", encode_blocks(cond.theta)}};
      },
      c);
}

json encode(const SubgroupSpec& s) {
  json conds = json::array();
  for (const auto& [v, c] : s.conditions) conds.push_back(json{{"place", encode(v)}, {"condition", encode(c)}});
  return json{{"n", s.n}, {"d", s.d}, {"conditions", conds}};
}

json encode(const Level& level) {
  json out = json::array();
  for (const auto& [v, e] : level) out.push_back(json{{"place", encode(v)}, {"e", e}});
  return out;
}

json encode(const TwistKind& t) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, IdentityTwist>) {
          return json{{"type", "identity"}};
        } else if constexpr (std::is_same_v<T, CentralTransport>) {
          return json{{"type", "central_transport"}, {"from", encode(k.from)}, {"to", encode(k.to)}, {"m", k.m}};
        } else if constexpr (std::is_same_v<T, PlaceSwap>) {
          return json{{"type", "place_swap"}, {"a", encode(k.a)}, {"b", encode(k.b)}};
        } else {
          return json{{"type", "graph_automorphism"},
                      {"place", encode(k.place)},
                      {"inverse", k.inverse},
                      {"corrupt_w0", k.corrupt_w0}};
        }
      },
      t);
}

json encode(const MethodParams& p) {
  json out = json::object();
  if (p.n) out["n"] = *p.n;
  if (p.p) out["p"] = *p.p;
  if (p.q) out["q"] = *p.q;
  if (p.m) out["m"] = *p.m;
  if (p.e) out["e"] = *p.e;
  if (p.d) out["d"] = *p.d;
  return out;
}

json encode(const WitnessBundle& b) {
  return json{{"method", to_string(b.method)}, {"params", encode(b.params)}, {"spec1", encode(b.spec1)},
              {"spec2", encode(b.spec2)},      {"level", encode(b.level)},   {"twist", encode(b.twist)}};
}

json encode(const IsoReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) {
    json x{{"check", f.check}, {"detail", f.detail}};
    x["sample"] = f.sample ? json(*f.sample) : json(nullptr);
    findings.push_back(std::move(x));
  }
  return json{{"samples_used", r.samples_used},
              {"generators_checked", r.generators_checked},
              {"homomorphism_failures", r.homomorphism_failures},
              {"membership_failures", r.membership_failures},
              {"inverse_failures", r.inverse_failures},
              {"order_match", r.order_match},
              {"exhaustive", r.exhaustive},
              {"exhaustive_elements", r.exhaustive_elements},
              {"findings", findings},
              {"verdict", to_string(r.verdict())}};
}

json encode(const ObstructionReport& r) {
  json cert = std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CentralCertificate>) {
          return json{{"type", "central_presence"},
                      {"places", encode_places(c.places)},
                      {"m", c.m},
                      {"presence", c.presence},
                      {"holds", c.holds}};
        } else if constexpr (std::is_same_v<T, ParabolicCertificate>) {
          json rows = json::array();
          for (const auto& row : c.rows) {
            rows.push_back(json{{"p", row.p},
                                {"lines", row.lines},
                                {"fixed_lines_theta", row.fixed_theta},
                                {"fixed_lines_image", row.fixed_image},
                                {"order_theta", row.order_theta.str()},
                                {"order_image", row.order_image.str()}});
          }
          return json{{"type", "parabolic"},
                      {"theta_blocks", c.theta_blocks},
                      {"image_blocks", c.image_blocks},
                      {"theta_invariant", c.theta_invariant},
                      {"rows", rows},
                      {"w0_determinant", c.w0_determinant},
                      {"conditions_match", c.conditions_match},
                      {"holds", c.holds}};
        } else {
          json rows = json::array();
          for (const auto& row : c.rows) {
            json x{{"place", encode(row.place)}, {"image", encode(row.image)}};
            x["roots"] = row.roots ? json::array({row.roots->first, row.roots->second}) : json(nullptr);
            rows.push_back(std::move(x));
          }
          return json{{"type", "galois"},
                      {"d", c.d},
                      {"rows", rows},
                      {"swaps_p", c.swaps_p},
                      {"moves_q", c.moves_q},
                      {"involution", c.involution},
                      {"conditions_match", c.conditions_match},
                      {"holds", c.holds}};
        }
      },
      r.certificate);
  return json{{"method", to_string(r.method)},
              {"certificate", cert},
              {"separating_element", encode(r.separating_element)},
              {"separating_in_first", r.separating_in_first},
              {"separating_in_second", r.separating_in_second},
              {"twist_choice", r.twist_choice},
              {"narrative", r.narrative},
              {"claim_status", r.claim_status},
              {"holds", r.holds()}};
}

// ---------------------------------------------------------------------------

SLMat decode_matrix(const json& j) {
  const auto n = field<std::size_t>(j, "n");
  const auto m = field<u64>(j, "modulus");
  const auto entries = field<std::vector<u64>>(j, "entries");
  if (entries.size() != n * n) throw InputError("matrix has the wrong number of entries");
  require_modulus(m);
  for (u64 x : entries) {
    if (x >= m) throw InputError("matrix entry out of range");
  }
  return SLMat::from_reduced(n, m, entries);
}

AmbientElement decode_ambient(const json& j) {
  if (!j.is_array()) throw InputError("ambient element must be an array");
  AmbientElement out;
  for (const auto& x : j) out.push_back(decode_matrix(x));
  return out;
}

PrimePlace decode_place(const json& j) {
  PrimePlace v;
  v.p = field<u64>(j, "p");
  v.kind = place_kind_from_string(field<std::string>(j, "kind"));
  v.label = field<std::string>(j, "label");
  if (j.contains("root") && !j.at("root").is_null()) v.root = field<u64>(j, "root");
  return v;
}

LocalCondition decode_condition(const json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "full") return Full{};
  if (type == "principal") return Principal{field<unsigned>(j, "e")};
  if (type == "central_principal") return CentralPrincipal{field<u64>(j, "m"), field<unsigned>(j, "e")};
  if (type == "parabolic_pullback") return ParabolicPullback{RootSubset::from_blocks(field<std::vector<std::size_t>>(j, "blocks"))};
  throw InputError("unknown condition type '" + type + "'");
}

namespace {

// Split places must be the ones split_pair produces; a hand-edited root or
// label would otherwise slip through.
void check_place(const PrimePlace& v, i64 d) {
  if (!v.is_split()) {
    if (v.kind == PlaceKind::rational && !(v == PrimePlace::rational(v.p))) throw InputError("malformed place " + v.label);
    return;
  }
  if (d == 0) throw InputError("split place " + v.label + " over Z");
  const auto [a, b] = PrimePlace::split_pair(v.p, d);
  const PrimePlace& want = v.kind == PlaceKind::split_first ? a : b;
  if (!(want == v) || want.label != v.label) throw InputError("place " + v.label + " does not match the splitting of " + std::to_string(v.p));
}

}  // namespace

SubgroupSpec decode_spec(const json& j) {
  const auto n = field<std::size_t>(j, "n");
  const auto d = field<i64>(j, "d");
  if (!j.at("conditions").is_array()) throw InputError("conditions must be an array");
  std::vector<std::pair<PrimePlace, LocalCondition>> conds;
  for (const auto& c : j.at("conditions")) {
    auto v = decode_place(c.at("place"));
    check_place(v, d);
    conds.emplace_back(std::move(v), decode_condition(c.at("condition")));
  }
  return SubgroupSpec::make(n, d, std::move(conds));
}

Level decode_level(const json& j) {
  if (!j.is_array()) throw InputError("level must be an array");
  Level out;
  for (const auto& x : j) out.emplace_back(decode_place(x.at("place")), field<unsigned>(x, "e"));
  return out;
}

TwistKind decode_twist(const json& j) {
  const auto type = field<std::string>(j, "type");
  if (type == "identity") return IdentityTwist{};
  if (type == "central_transport") return CentralTransport{decode_place(j.at("from")), decode_place(j.at("to")), field<u64>(j, "m")};
  if (type == "place_swap") return PlaceSwap{decode_place(j.at("a")), decode_place(j.at("b"))};
  if (type == "graph_automorphism") {
    return GraphAutAtPlace{decode_place(j.at("place")), field<bool>(j, "inverse"), field<bool>(j, "corrupt_w0")};
  }
  throw InputError("unknown twist type '" + type + "'");
}

MethodParams decode_params(const json& j) {
  if (!j.is_object()) throw InputError("params must be an object");
  MethodParams p;
  if (j.contains("n")) p.n = field<std::size_t>(j, "n");
  if (j.contains("p")) p.p = field<u64>(j, "p");
  if (j.contains("q")) p.q = field<u64>(j, "q");
  if (j.contains("m")) p.m = field<u64>(j, "m");
  if (j.contains("e")) p.e = field<unsigned>(j, "e");
  if (j.contains("d")) p.d = field<i64>(j, "d");
  return p;
}

WitnessBundle decode_bundle(const json& j) {
  try {
    WitnessBundle b;
    b.method = method_from_string(field<std::string>(j, "method"));
    b.params = decode_params(j.at("params"));
    b.spec1 = decode_spec(j.at("spec1"));
    b.spec2 = decode_spec(j.at("spec2"));
    b.level = decode_level(j.at("level"));
    for (const auto& [v, e] : b.level) check_place(v, b.spec1.d);
    b.twist = decode_twist(j.at("twist"));
    const bool need_pq = b.method != Method::S16;
    if (!b.params.p || (need_pq && !b.params.q) || (b.method == Method::C && !b.params.d)) {
      throw InputError("params are incomplete for " + to_string(b.method));
    }
    return b;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed bundle: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace profin
