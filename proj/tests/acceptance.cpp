// Acceptance runner: one PASS/FAIL line per criterion with its runtime and
// time budget. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "profin/chevalley.hpp"
#include "profin/cli.hpp"
#include "profin/ring_arith.hpp"

using namespace profin;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Every CLI invocation in a criterion is made twice; the byte comparison
// feeds criterion 7.
struct Determinism {
  std::vector<std::string> mismatches;
  std::size_t runs = 0;
} determinism;

Run cli_twice(const std::vector<std::string>& args) {
  const Run a = cli(args), b = cli(args);
  ++determinism.runs;
  if (a.out != b.out || a.code != b.code) {
    std::string label;
    for (const auto& s : args) label += s + " ";
    determinism.mismatches.push_back(label);
  }
  return a;
}

struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string order_string(const BigInt& x) { return x.str(); }

std::vector<std::vector<u64>> as_vectors(const std::vector<SLMat>& gens) {
  std::vector<std::vector<u64>> out;
  for (const auto& g : gens) out.emplace_back(g.entries().begin(), g.entries().end());
  return out;
}

bool clean(const json& report) {
  return report["verdict"] == "witnessed" && report["homomorphism_failures"] == 0 &&
         report["membership_failures"] == 0 && report["inverse_failures"] == 0 && report["order_match"] == true;
}

void criterion1(Checker& c) {
  const std::vector<std::pair<u64, u64>> sl2{{5, 120}, {7, 336}, {4, 48}, {6, 144}, {3, 24}, {2, 6}};
  for (auto [m, expect] : sl2) {
    const u64 brute = oracle::count_sl2(m);
    c.expect(brute == expect, "brute |SL2(Z/" + std::to_string(m) + ")| = " + std::to_string(brute));
    // the product formula, evaluated factor by factor
    BigInt formula = 1;
    for (u64 p : prime_divisors(m)) {
      unsigned e = 0;
      for (u64 r = m; r % p == 0; r /= p) ++e;
      formula *= sl_order(2, p, e);
    }
    c.expect(formula == expect, "formula |SL2(Z/" + std::to_string(m) + ")|");
  }

  for (u64 M = 2; M <= 1000; ++M) {
    std::vector<u64> moduli;
    for (u64 p : prime_divisors(M)) {
      u64 q = 1;
      for (u64 r = M; r % p == 0; r /= p) q *= p;
      moduli.push_back(q);
    }
    std::vector<bool> seen(M, false);
    for (u64 x = 0; x < M; ++x) {
      const auto parts = crt_split(x, moduli);
      const u64 back = crt_join(parts, moduli);
      if (back != x) {
        c.expect(false, "CRT round trip at M = " + std::to_string(M));
        return;
      }
      const u64 independent = oracle::crt_search(parts, moduli);
      if (independent != x || seen[x]) {
        c.expect(false, "CRT bijection at M = " + std::to_string(M));
        return;
      }
      seen[x] = true;
    }
  }

  for (u64 p : {7, 17, 23}) {
    const auto roots = oracle::square_roots(2, p);
    c.expect(roots.size() == 2, "two square roots of 2 mod " + std::to_string(p));
    for (u64 r : roots)
      for (unsigned e = 1; e <= 4; ++e) {
        const u64 pe = checked_pow(p, e);
        const u64 lifted = hensel_lift_sqrt(2, p, r, e);
        c.expect(lifted < pe && lifted % p == r && lifted * lifted % pe == 2,
                 "Hensel lift " + std::to_string(r) + " mod " + std::to_string(p) + "^" + std::to_string(e));
      }
  }
}

void criterion2(Checker& c) {
  const auto r = cli_twice({"witness", "method-a", "--n", "4", "--p", "5", "--q", "7", "--order", "2", "--level",
                            "2", "--samples", "10000", "--seed", "0"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  const json j = parse_json(r.out);
  c.expect(clean(j["report"]), "verify_iso clean");
  c.expect(j["report"]["samples_used"] == 10000, "10^4 samples");
  const BigInt expect = BigInt(2) * boost::multiprecision::pow(BigInt(5), 15) * boost::multiprecision::pow(BigInt(7), 15);
  c.expect(j["orders"]["first"] == order_string(expect), "first order 2*5^15*7^15");
  c.expect(j["orders"]["second"] == order_string(expect), "second order 2*5^15*7^15");
  // independent count: the kernel of SL4(Z/p^2) -> SL4(F_p) has |SL4(Z/p^2)| / |SL4(F_p)|
  // elements, and the scalar condition adds the two square roots of 1 at one place
  const BigInt kernel5 = sl_order(4, 5, 2) / sl_order(4, 5, 1);
  const BigInt kernel7 = sl_order(4, 7, 2) / sl_order(4, 7, 1);
  c.expect(2 * kernel5 * kernel7 == expect, "kernel product");
  c.expect(j["obstruction"]["certificate"]["presence"] == json::parse("[[true,false],[false,true]]"),
           "presence matrix");
  c.expect(j["obstruction"]["holds"] == true, "obstruction holds");
}

void criterion3(Checker& c) {
  const auto r = cli_twice({"witness", "method-b", "--p", "5", "--q", "7", "--samples", "10000", "--seed", "0"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  const json j = parse_json(r.out);
  c.expect(clean(j["report"]), "verify_iso clean");
  c.expect(j["report"]["generators_checked"].get<u64>() > 0, "generators checked");

  const RootSubset p1 = RootSubset::from_blocks({1, 3});
  const RootSubset p2 = p1.dynkin_image();
  // generator-exact: every P1 generator at q maps into P2 under the graph automorphism
  const GraphAutomorphism phi(4, 7);
  c.expect(phi.w0_determinant() == 1, "det w0 = 1");
  for (const auto& g : parabolic_generators(ParabolicSpec(7, p1)))
    c.expect(parabolic_membership(phi(g), ParabolicSpec(7, p2)), "phi(generator) in P2");

  const auto& rows = j["obstruction"]["certificate"]["rows"];
  const std::vector<std::pair<u64, u64>> primes{{5, 156}, {7, 400}};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    auto [p, lines] = primes[i];
    c.expect(rows[i]["lines"] == lines, "line count at " + std::to_string(p));
    const auto f1 = oracle::fixed_lines(as_vectors(parabolic_generators(ParabolicSpec(p, p1))), 4, p);
    const auto f2 = oracle::fixed_lines(as_vectors(parabolic_generators(ParabolicSpec(p, p2))), 4, p);
    c.expect(f1 == 1 && rows[i]["fixed_lines_theta"] == 1, "fixed lines of P1 at " + std::to_string(p));
    c.expect(f2 == 0 && rows[i]["fixed_lines_image"] == 0, "fixed lines of P2 at " + std::to_string(p));
  }
  c.expect(rows[0]["order_theta"] == "186000000" && rows[0]["order_image"] == "186000000", "orders at 5");
  // |P1| = |SL4(F5)| / (number of lines)
  c.expect(sl_order(4, 5, 1) / 156 == 186'000'000, "index of P1 is 156");
  c.expect(j["obstruction"]["holds"] == true, "obstruction holds");
}

void criterion4(Checker& c) {
  const auto r = cli_twice({"witness", "method-c", "--d", "2", "--p", "7", "--q", "17", "--samples", "10000",
                            "--seed", "0"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  const json j = parse_json(r.out);
  c.expect(clean(j["report"]), "verify_iso clean");
  c.expect(j["orders"]["first"] == j["orders"]["second"], "equal orders");
  c.expect(j["bundle"]["twist"]["type"] == "place_swap", "place swap twist");

  const auto& cert = j["obstruction"]["certificate"];
  const auto& rows = cert["rows"];
  c.expect(oracle::square_roots(2, 7) == std::vector<u64>{3, 4}, "oracle roots mod 7");
  c.expect(oracle::square_roots(2, 17) == std::vector<u64>{6, 11}, "oracle roots mod 17");
  c.expect(rows[0]["roots"] == json::parse("[3,4]"), "roots (3,4)");
  c.expect(rows[2]["roots"] == json::parse("[6,11]"), "roots (6,11)");
  c.expect(rows[0]["place"]["label"] == "7.1" && rows[0]["image"]["label"] == "7.2", "sigma(p1) = p2");
  c.expect(rows[2]["place"]["label"] == "17.1" && rows[2]["image"]["label"] == "17.2", "sigma(q1) = q2");
  c.expect(cert["involution"] == true && cert["holds"] == true, "Galois certificate");
}

void criterion5(Checker& c) {
  const auto r = cli_twice({"witness", "s16", "--p", "7", "--samples", "100", "--seed", "0"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  const json j = parse_json(r.out);
  c.expect(clean(j["report"]), "verify_iso clean");
  c.expect(j["orders"]["first"] == "2" && j["orders"]["second"] == "2", "orders 2 and 2");
  c.expect(j["report"]["exhaustive"] == true, "exhaustive");
  c.expect(j["report"]["exhaustive_elements"] == 2, "two elements checked");
  c.expect(j["bundle"]["twist"]["type"] == "central_transport", "central transport twist");
  // brute force: scalar +-I at one prime times the identity at the other, on each side
  auto count = [](u64 m, bool scalar) {
    u64 k = 0;
    oracle::for_each_sl2(m, [&](const oracle::Mat2& g) {
      if (g.b == 0 && g.c == 0 && g.a == g.d && (g.a == 1 || (scalar && g.a == m - 1))) ++k;
    });
    return k;
  };
  const u64 brute = count(3, true) * count(5, false);
  c.expect(brute == 2 && count(3, false) * count(5, true) == 2, "brute-force orders");
}

void criterion6(Checker& c) {
  const auto swap = cli_twice({"witness", "method-a", "--fault", "place-swap", "--samples", "1000", "--seed", "0"});
  c.expect(swap.code == 1, "place-swap exit " + std::to_string(swap.code));
  const json js = parse_json(swap.out);
  c.expect(js["verdict"] == "refuted", "place-swap refuted");
  c.expect(js["report"]["membership_failures"].get<u64>() + js["report"]["homomorphism_failures"].get<u64>() > 0,
           "place-swap failures counted");

  const auto sign = cli_twice({"witness", "method-b", "--fault", "w0-sign", "--samples", "1000", "--seed", "0"});
  c.expect(sign.code == 1, "w0-sign exit " + std::to_string(sign.code));
  const json jw = parse_json(sign.out);
  c.expect(jw["verdict"] == "refuted", "w0-sign refuted");
  c.expect(jw["report"]["membership_failures"].get<u64>() > 0, "w0-sign failures counted");
  c.expect(sign.err.find("graph-automorphism determinant check") != std::string::npos, "w0-sign finding named");
}

void criterion7(Checker& c) {
  c.expect(determinism.runs >= 6, "all criteria were run twice");
  for (const auto& m : determinism.mismatches) c.expect(false, "differing bytes: " + m);
  // worker count must not change the bytes either
  const std::vector<std::string> base{"witness", "method-b", "--samples", "2000", "--seed", "11"};
  auto one = base, many = base;
  one.insert(one.end(), {"--workers", "1"});
  many.insert(many.end(), {"--workers", "4"});
  c.expect(cli(one).out == cli(many).out, "workers 1 vs 4");
  const auto search = cli_twice({"search-primes", "--d", "2", "--count", "5"});
  c.expect(search.code == 0, "search-primes");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<void(Checker&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle suite", 30, criterion1},          {2, "method A witness", 60, criterion2},
      {3, "method B witness", 120, criterion3},     {4, "method C witness", 30, criterion4},
      {5, "Gamma(15) preset", 5, criterion5},       {6, "negative controls", 30, criterion6},
      {7, "byte-identical JSON", 1e9, criterion7},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= cr.budget) c.expect(false, "over time budget");
    const bool ok = c.failures.empty();
    if (!ok) ++failed;
    if (cr.budget < 1e8)
      std::printf("%s  criterion %d  %-22s %7.2f s (budget %.0f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                  cr.budget);
    else
      std::printf("%s  criterion %d  %-22s %7.2f s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs);
    for (const auto& f : c.failures) std::printf("      - %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
