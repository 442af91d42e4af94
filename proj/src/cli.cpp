#include "profin/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace profin {

Fault fault_from_string(const std::string& s) {
  if (s == "none") return Fault::none;
  if (s == "place-swap") return Fault::place_swap;
  if (s == "w0-sign") return Fault::w0_sign;
  throw InputError("unknown fault '" + s + "'");
}

std::string to_string(Fault f) {
  switch (f) {
    case Fault::none: return "none";
    case Fault::place_swap: return "place-swap";
    case Fault::w0_sign: return "w0-sign";
  }
  return "?";
}

void inject_fault(WitnessBundle& b, Fault f) {
  switch (f) {
    case Fault::none:
      return;
    case Fault::place_swap: {
      if (b.method == Method::C) {
        const i64 d = b.params.d.value();
        b.twist = PlaceSwap{PrimePlace::split_pair(b.params.p.value(), d).first,
                            PrimePlace::split_pair(b.params.q.value(), d).first};
      } else if (b.method == Method::S16) {
        b.twist = PlaceSwap{PrimePlace::rational(3), PrimePlace::rational(5)};
      } else {
        b.twist = PlaceSwap{PrimePlace::rational(b.params.p.value()), PrimePlace::rational(b.params.q.value())};
      }
      return;
    }
    case Fault::w0_sign: {
      auto* g = std::get_if<GraphAutAtPlace>(&b.twist);
      if (!g) throw InputError("the w0-sign fault needs a graph-automorphism twist (method-b)");
      g->corrupt_w0 = true;
      return;
    }
  }
}

WitnessOutcome run_witness(const WitnessBundle& b, u64 samples, u64 seed, unsigned workers) {
  WitnessOutcome out;
  const QuotientIso iso = b.iso();
  out.order1 = iso.source().order();
  out.order2 = iso.target().order();
  out.report = verify_iso(iso, samples, seed, workers);
  out.obstruction = obstruction_report(b);
  const bool ok = out.report.verdict() == Verdict::witnessed && out.obstruction.holds() && out.order1 == out.order2;
  out.exit_code = ok ? 0 : 1;
  return out;
}

json witness_document(const std::string& schema, const json& config, const WitnessBundle& b,
                      const WitnessOutcome& outcome) {
  return json{{"schema", schema},
              {"schema_version", kSchemaVersion},
              {"config", config},
              {"bundle", encode(b)},
              {"orders", json{{"first", outcome.order1.str()}, {"second", outcome.order2.str()}}},
              {"report", encode(outcome.report)},
              {"obstruction", encode(outcome.obstruction)},
              {"verdict", outcome.exit_code == 0 ? "witnessed" : "refuted"},
              {"exit_code", outcome.exit_code}};
}

namespace {

struct Common {
  u64 samples = 10000;
  u64 seed = 0;
  unsigned workers = 0;
  std::string out_path;
  std::string fault = "none";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--samples", c.samples, "sampled pairs for verification")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--workers", c.workers, "verification threads (0 = hardware)");
  cmd->add_option("--out", c.out_path, "write JSON here instead of standard output");
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = dump(doc);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

json read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_json(ss.str());
}

// A witness document or a bare bundle.
std::pair<WitnessBundle, json> load_bundle(const std::string& path) {
  json doc = read_file(path);
  const json& b = doc.contains("bundle") ? doc.at("bundle") : doc;
  json config = doc.contains("config") ? doc.at("config") : json::object();
  return {decode_bundle(b), config};
}

void summarize(std::ostream& err, const std::string& what, const WitnessOutcome& o) {
  err << what << ": " << (o.exit_code == 0 ? "witnessed" : "refuted") << " (samples "
      << o.report.samples_used << ", failures " << o.report.total_failures() << ", certificate "
      << (o.obstruction.holds() ? "holds" : "fails") << ")\n";
  for (const auto& f : o.report.findings) {
    err << "  " << f.check << ": " << f.detail;
    if (f.sample) err << " [pair " << *f.sample << "]";
    err << "\n";
  }
}

struct MethodOpts {
  std::optional<std::size_t> n;
  std::optional<u64> p, q, m;
  std::optional<unsigned> e;
  std::optional<i64> d;
};

WitnessBundle build_bundle(Method method, const MethodOpts& o) {
  switch (method) {
    case Method::A: return method_a_pair(o.n.value_or(4), o.p.value_or(5), o.q.value_or(7), o.m.value_or(2), o.e.value_or(2));
    case Method::B: return method_b_pair(o.p.value_or(5), o.q.value_or(7), o.e.value_or(1));
    case Method::C: return method_c_pair(o.d.value_or(2), o.p.value_or(7), o.q.value_or(17), o.e.value_or(1));
    case Method::S16: return s16_pair(o.p.value_or(7), o.e.value_or(1));
  }
  throw InputError("unknown method");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-level witnesses for pairs of congruence subgroups with isomorphic quotients", "profin"};
  app.require_subcommand(1);

  // witness
  auto* witness = app.add_subcommand("witness", "build a preset pair, verify its twist, certify the obstruction");
  witness->require_subcommand(1);
  Common wc;
  MethodOpts mo;
  std::optional<Method> chosen;
  const std::vector<std::pair<Method, const char*>> methods{{Method::A, "central elements moved between two primes"},
                                                            {Method::B, "parabolic moved by the diagram symmetry"},
                                                            {Method::C, "condition moved between split places"},
                                                            {Method::S16, "SL_2 pair at 3 and 5"}};
  for (const auto& [m, help] : methods) {
    auto* cmd = witness->add_subcommand(to_string(m), help);
    add_common(cmd, wc);
    cmd->add_option("--fault", wc.fault, "fault injection")->check(CLI::IsMember({"none", "place-swap", "w0-sign"}));
    if (m == Method::A) {
      cmd->add_option("--n", mo.n, "rank + 1 (default 4)");
      cmd->add_option("--order", mo.m, "central order m (default 2)");
    }
    if (m == Method::C) cmd->add_option("--d", mo.d, "squarefree d >= 2 (default 2)");
    cmd->add_option("--p", mo.p, "first prime");
    if (m != Method::S16) cmd->add_option("--q", mo.q, "second prime");
    cmd->add_option("--level", mo.e, "level exponent");
    cmd->callback([&chosen, m = m] { chosen = m; });
  }

  // search-primes
  auto* search = app.add_subcommand("search-primes", "list primes splitting in Q(sqrt d), ascending");
  i64 sp_d = 1;
  std::size_t sp_count = 0;
  std::optional<u64> sp_center;
  std::vector<u64> sp_exclude, sp_congruence;
  search->add_option("--d", sp_d, "squarefree d (1 = every odd prime)");
  search->add_option("--count", sp_count, "how many primes")->required();
  search->add_option("--full-center", sp_center, "require p = 1 mod this, so F_p holds all its roots of unity");
  search->add_option("--exclude", sp_exclude, "primes to skip");
  search->add_option("--congruence", sp_congruence, "R M: require p = R mod M")->expected(2);

  // verify-iso, obstruct
  auto* verify = app.add_subcommand("verify-iso", "re-verify the twist of a saved bundle");
  std::string bundle_path;
  Common vc;
  std::optional<u64> v_samples, v_seed;
  verify->add_option("--bundle", bundle_path, "witness or bundle JSON")->required();
  verify->add_option("--samples", v_samples, "sampled pairs (default: the file's config, else 10000)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", v_seed, "master seed (default: the file's config, else 0)");
  verify->add_option("--workers", vc.workers, "verification threads (0 = hardware)");
  verify->add_option("--out", vc.out_path, "write JSON here instead of standard output");

  auto* obstruct = app.add_subcommand("obstruct", "recompute the certificates of a saved bundle");
  std::string obstruct_path, obstruct_out;
  obstruct->add_option("--bundle", obstruct_path, "witness or bundle JSON")->required();
  obstruct->add_option("--out", obstruct_out, "write JSON here instead of standard output");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "oracle checks and every preset witness");
  Common sc;
  selftest->add_option("--samples", sc.samples, "sampled pairs per preset")->check(CLI::PositiveNumber);
  selftest->add_option("--workers", sc.workers, "verification threads (0 = hardware)");
  selftest->add_option("--fault", sc.fault, "fault injection")->check(CLI::IsMember({"none", "place-swap", "w0-sign"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (witness->parsed()) {
      const Method method = chosen.value();
      WitnessBundle b = build_bundle(method, mo);
      const Fault fault = fault_from_string(wc.fault);
      inject_fault(b, fault);
      const auto outcome = run_witness(b, wc.samples, wc.seed, wc.workers);
      json config{{"command", "witness"},
                  {"method", to_string(method)},
                  {"params", encode(b.params)},
                  {"samples", wc.samples},
                  {"seed", wc.seed},
                  {"fault", to_string(fault)}};
      emit(witness_document("profin/witness", config, b, outcome), wc.out_path, out);
      summarize(err, to_string(method), outcome);
      return outcome.exit_code;
    }
    if (search->parsed()) {
      if (sp_count == 0) throw InputError("--count must be at least 1");
      std::optional<Congruence> cong;
      if (sp_center && !sp_congruence.empty()) throw InputError("use --full-center or --congruence, not both");
      if (sp_center) {
        if (*sp_center == 0) throw InputError("--full-center must be positive");
        cong = Congruence{*sp_center, 1 % *sp_center};
      }
      if (!sp_congruence.empty()) cong = Congruence{sp_congruence[1], sp_congruence[0]};
      std::set<u64> exclude(sp_exclude.begin(), sp_exclude.end());
      const auto primes = find_split_primes(sp_d, sp_count, exclude, cong);
      json config{{"command", "search-primes"}, {"d", sp_d}, {"count", sp_count}, {"exclude", exclude}};
      config["congruence"] = cong ? json{{"modulus", cong->modulus}, {"residue", cong->residue}} : json(nullptr);
      emit(json{{"schema", "profin/primes"}, {"schema_version", kSchemaVersion}, {"config", config}, {"primes", primes}},
           "", out);
      return 0;
    }
    if (verify->parsed()) {
      auto [b, file_config] = load_bundle(bundle_path);
      const u64 samples = v_samples ? *v_samples : file_config.value("samples", u64{10000});
      const u64 seed = v_seed ? *v_seed : file_config.value("seed", u64{0});
      if (samples == 0) throw InputError("sample count must be at least 1");
      const auto outcome = run_witness(b, samples, seed, vc.workers);
      json config{{"command", "verify-iso"}, {"samples", samples}, {"seed", seed}};
      emit(witness_document("profin/verify", config, b, outcome), vc.out_path, out);
      summarize(err, "verify-iso " + to_string(b.method), outcome);
      return outcome.exit_code;
    }
    if (obstruct->parsed()) {
      auto [b, file_config] = load_bundle(obstruct_path);
      const auto report = obstruction_report(b);
      const int code = report.holds() ? 0 : 1;
      emit(json{{"schema", "profin/obstruction"},
                {"schema_version", kSchemaVersion},
                {"config", json{{"command", "obstruct"}}},
                {"bundle", encode(b)},
                {"obstruction", encode(report)},
                {"exit_code", code}},
           obstruct_out, out);
      err << "obstruct " << to_string(b.method) << ": certificate " << (code == 0 ? "holds" : "fails") << "\n";
      return code;
    }
    if (selftest->parsed()) {
      const auto results = run_selftest(sc.samples, fault_from_string(sc.fault), sc.workers);
      const SelftestResult* first_failure = nullptr;
      for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << r.name;
        if (!r.passed) out << ": " << r.detail;
        out << "\n";
        if (!r.passed && !first_failure) first_failure = &r;
      }
      if (first_failure) {
        err << "selftest failed: " << first_failure->name << ": " << first_failure->detail << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace profin
