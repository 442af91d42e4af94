#include <functional>
#include <map>

#include "profin/cli.hpp"

namespace profin {

namespace {

SelftestResult check(std::string name, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    return {std::move(name), failure.empty(), std::move(failure)};
  } catch (const std::exception& e) {
    return {std::move(name), false, std::string("exception: ") + e.what()};
  }
}

std::map<u64, unsigned> factor(u64 m) {
  std::map<u64, unsigned> out;
  for (u64 p : prime_divisors(m)) {
    while (m % p == 0) {
      m /= p;
      ++out[p];
    }
  }
  return out;
}

std::string sl2_counts() {
  for (u64 m = 2; m <= 7; ++m) {
    u64 count = 0;
    for (u64 a = 0; a < m; ++a)
      for (u64 b = 0; b < m; ++b)
        for (u64 c = 0; c < m; ++c)
          for (u64 d = 0; d < m; ++d) count += (a * d + m * m - b * c) % m == 1 % m;
    BigInt formula = 1;
    for (auto [p, e] : factor(m)) formula *= sl_order(2, p, e);
    if (formula != count) {
      return "|SL_2(Z/" + std::to_string(m) + ")|: counted " + std::to_string(count) + ", formula " + formula.str();
    }
  }
  return "";
}

std::string crt_bijections() {
  for (u64 m = 2; m <= 1000; ++m) {
    std::vector<u64> moduli;
    for (auto [p, e] : factor(m)) moduli.push_back(checked_pow(p, e));
    std::vector<char> hit(m, 0);
    for (u64 x = 0; x < m; ++x) {
      const u64 y = crt_join(crt_split(x, moduli), moduli);
      if (y != x || hit[y]) return "round trip fails at " + std::to_string(x) + " mod " + std::to_string(m);
      hit[y] = 1;
    }
  }
  return "";
}

std::string hensel_lifts() {
  for (u64 p : {7, 17, 23}) {
    const auto s = splitting_type(p, 2);
    for (u64 r : {s.roots->first, s.roots->second}) {
      for (unsigned e = 1; e <= 4; ++e) {
        const u64 q = checked_pow(p, e);
        const u64 x = hensel_lift_sqrt(2, p, r, e);
        if (mul_mod(x, x, q) != 2 % q || x % p != r) {
          return "lift of " + std::to_string(r) + " mod " + std::to_string(p) + "^" + std::to_string(e);
        }
      }
    }
  }
  return "";
}

// Counts lines through the action on points, not through the batched kernel.
std::string fixed_line_baselines() {
  const RootSubset theta = RootSubset::from_blocks({1, 3});
  for (u64 p : {5, 7}) {
    for (const auto& [t, expect] : {std::pair{theta, std::size_t{1}}, std::pair{theta.dynkin_image(), std::size_t{0}}}) {
      const ParabolicSpec P(p, t);
      const auto gens = parabolic_generators(P);
      std::size_t direct = 0;
      for (const auto& line : lines_of_projective_space(4, p)) {
        bool fixed = true;
        for (const auto& g : gens) fixed = fixed && act(g, line) == line;
        direct += fixed;
      }
      const std::size_t kernel = fixed_lines(P);
      if (direct != expect || kernel != expect) {
        return "p = " + std::to_string(p) + ": direct " + std::to_string(direct) + ", kernel " +
               std::to_string(kernel) + ", expected " + std::to_string(expect);
      }
    }
  }
  return "";
}

std::string preset(WitnessBundle b, Fault fault, u64 samples, unsigned workers) {
  inject_fault(b, fault);
  const auto out = run_witness(b, samples, 0, workers);
  if (out.exit_code == 0) return "";
  if (!out.report.findings.empty()) {
    const auto& f = out.report.findings.front();
    return f.check + ": " + f.detail;
  }
  if (!out.obstruction.holds()) return "obstruction certificate does not hold";
  return "verification refuted";
}

}  // namespace

std::vector<SelftestResult> run_selftest(u64 samples, Fault fault, unsigned workers) {
  if (samples == 0) throw InputError("sample count must be at least 1");
  std::vector<SelftestResult> out;
  out.push_back(check("SL_2(Z/m) enumeration, m = 2..7", sl2_counts));
  out.push_back(check("CRT split/join bijective, M <= 1000", crt_bijections));
  out.push_back(check("Hensel lifts of sqrt 2, p in {7, 17, 23}, e <= 4", hensel_lifts));
  out.push_back(check("fixed-line baselines at p = 5, 7", fixed_line_baselines));
  out.push_back(check("method-a witness", [&] {
    return preset(method_a_pair(4, 5, 7, 2, 2), fault == Fault::place_swap ? fault : Fault::none, samples, workers);
  }));
  out.push_back(check("method-b witness", [&] {
    return preset(method_b_pair(5, 7), fault == Fault::w0_sign ? fault : Fault::none, samples, workers);
  }));
  out.push_back(check("method-c witness", [&] { return preset(method_c_pair(2, 7, 17), Fault::none, samples, workers); }));
  out.push_back(check("s16 witness", [&] { return preset(s16_pair(7), Fault::none, samples, workers); }));
  return out;
}

}  // namespace profin
