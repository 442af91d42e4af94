#include "profin/methods.hpp"

#include <memory>
#include <numeric>

namespace profin {

std::string to_string(Method m) {
  switch (m) {
    case Method::A: return "method-a";
    case Method::B: return "method-b";
    case Method::C: return "method-c";
    case Method::S16: return "s16";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::A, Method::B, Method::C, Method::S16}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown method '" + s + "'");
}

QuotientIso WitnessBundle::iso() const {
  auto q1 = std::make_shared<const FiniteQuotientGroup>(spec1, level);
  auto q2 = std::make_shared<const FiniteQuotientGroup>(spec2, level);
  return QuotientIso(twist, std::move(q1), std::move(q2));
}

namespace {

void require_odd_prime(u64 p, const char* name) {
  if (p < 3 || !is_prime(p)) throw InputError(std::string(name) + " = " + std::to_string(p) + " is not an odd prime");
}

void require_level(unsigned e) {
  if (e == 0) throw InputError("level exponent must be >= 1");
}

PrimePlace Q(u64 p) { return PrimePlace::rational(p); }

void check_central_order(std::size_t n, u64 m, u64 p, const char* name) {
  const u64 g = std::gcd(static_cast<u64>(n), p - 1);
  if (g % m != 0) {
    throw InputError("m = " + std::to_string(m) + " does not divide gcd(n, " + name + " - 1) = " + std::to_string(g) +
                     " at " + name + " = " + std::to_string(p) +
                     "; both places need central elements of the same order m");
  }
}

std::pair<PrimePlace, PrimePlace> split_or_explain(i64 d, u64 p) {
  const auto s = splitting_type(p, d);
  if (!s.split()) {
    std::string why = s.type == SplitType::inert ? "inert (" + std::to_string(d) + " is not a square mod " +
                                                       std::to_string(p) + ")"
                                                 : "ramified (" + std::to_string(p) + " divides " +
                                                       std::to_string(d) + ")";
    throw InputError(std::to_string(p) + " does not split in Q(sqrt " + std::to_string(d) + "): " + why);
  }
  return PrimePlace::split_pair(p, d);
}

const RootSubset kTheta = RootSubset::from_blocks({1, 3});

}  // namespace

WitnessBundle method_a_pair(std::size_t n, u64 p, u64 q, u64 m, unsigned e) {
  require_odd_prime(p, "p");
  require_odd_prime(q, "q");
  if (p == q) throw InputError("p and q must be distinct");
  if (n < 2) throw InputError("n must be >= 2");
  if (m < 2) throw InputError("central order m must be >= 2");
  require_level(e);
  check_central_order(n, m, p, "p");
  check_central_order(n, m, q, "q");
  WitnessBundle b;
  b.method = Method::A;
  b.params = MethodParams{n, p, q, m, e, std::nullopt};
  b.spec1 = SubgroupSpec::make(n, 0, {{Q(p), CentralPrincipal{m, 1}}, {Q(q), Principal{1}}});
  b.spec2 = SubgroupSpec::make(n, 0, {{Q(p), Principal{1}}, {Q(q), CentralPrincipal{m, 1}}});
  b.level = {{Q(p), e}, {Q(q), e}};
  b.twist = CentralTransport{Q(p), Q(q), m};
  return b;
}

WitnessBundle method_b_pair(u64 p, u64 q, unsigned e) {
  for (auto [v, name] : {std::pair{p, "p"}, std::pair{q, "q"}}) {
    if (!is_prime(v)) throw InputError(std::string(name) + " = " + std::to_string(v) + " is not prime");
    if (v == 2 || v == 3) throw InputError(std::string(name) + " must differ from 2 and 3");
  }
  if (p == q) throw InputError("p and q must be distinct");
  require_level(e);
  const RootSubset image = kTheta.dynkin_image();
  WitnessBundle b;
  b.method = Method::B;
  b.params = MethodParams{4, p, q, std::nullopt, e, std::nullopt};
  b.spec1 = SubgroupSpec::make(
      4, 0, {{Q(p), ParabolicPullback{kTheta}}, {Q(q), ParabolicPullback{kTheta}}, {Q(3), Principal{1}}});
  b.spec2 = SubgroupSpec::make(
      4, 0, {{Q(p), ParabolicPullback{kTheta}}, {Q(q), ParabolicPullback{image}}, {Q(3), Principal{1}}});
  b.level = {{Q(3), e}, {Q(p), e}, {Q(q), e}};
  b.twist = GraphAutAtPlace{Q(q), false, false};
  return b;
}

WitnessBundle method_c_pair(i64 d, u64 p, u64 q, unsigned e) {
  if (d < 2 || !is_squarefree(d)) throw InputError("d must be squarefree and >= 2");
  require_odd_prime(p, "p");
  require_odd_prime(q, "q");
  if (p == q) throw InputError("p and q must be distinct");
  require_level(e);
  const auto [p1, p2] = split_or_explain(d, p);
  const auto [q1, q2] = split_or_explain(d, q);
  WitnessBundle b;
  b.method = Method::C;
  b.params = MethodParams{2, p, q, std::nullopt, e, d};
  b.spec1 = SubgroupSpec::make(2, d, {{p1, Principal{1}}, {q1, Principal{1}}});
  b.spec2 = SubgroupSpec::make(2, d, {{p2, Principal{1}}, {q1, Principal{1}}});
  b.level = {{p1, e}, {p2, e}, {q1, e}, {q2, e}};
  b.twist = PlaceSwap{p1, p2};
  return b;
}

WitnessBundle s16_pair(u64 p, unsigned e) {
  if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
  if (p == 2 || p == 3 || p == 5) throw InputError("p must differ from 2, 3 and 5");
  require_level(e);
  WitnessBundle b;
  b.method = Method::S16;
  b.params = MethodParams{2, p, std::nullopt, 2, e, std::nullopt};
  b.spec1 = SubgroupSpec::make(2, 0, {{Q(3), CentralPrincipal{2, 1}}, {Q(5), Principal{1}}});
  b.spec2 = SubgroupSpec::make(2, 0, {{Q(3), Principal{1}}, {Q(5), CentralPrincipal{2, 1}}});
  b.level = {{Q(3), e}, {Q(5), e}};
  b.twist = CentralTransport{Q(3), Q(5), 2};
  return b;
}

// ---------------------------------------------------------------------------

bool ObstructionReport::holds() const {
  const bool cert = std::visit([](const auto& c) { return c.holds; }, certificate);
  return cert && separating_in_first && !separating_in_second;
}

namespace {

CentralCertificate central_certificate(const FiniteQuotientGroup& g1, const FiniteQuotientGroup& g2,
                                       const PrimePlace& p, const PrimePlace& q, u64 m) {
  CentralCertificate c;
  c.places = {p, q};
  c.m = m;
  for (const auto* g : {&g1, &g2}) c.presence.push_back({g->central_presence(p, m), g->central_presence(q, m)});
  c.holds = c.presence == std::vector<std::vector<bool>>{{true, false}, {false, true}};
  return c;
}

const RootSubset* parabolic_at(const SubgroupSpec& s, const PrimePlace& v) {
  const LocalCondition* c = s.condition_at(v);
  if (!c) return nullptr;
  const auto* pp = std::get_if<ParabolicPullback>(c);
  return pp ? &pp->theta : nullptr;
}

ParabolicCertificate parabolic_certificate(const WitnessBundle& b) {
  ParabolicCertificate c;
  const u64 p = b.params.p.value(), q = b.params.q.value();
  const RootSubset* theta = parabolic_at(b.spec1, Q(p));
  if (!theta) throw InputError("bundle has no parabolic condition at p");
  const RootSubset image = theta->dynkin_image();
  c.theta_blocks = theta->blocks();
  c.image_blocks = image.blocks();
  c.theta_invariant = theta->dynkin_invariant();
  const RootSubset* q1 = parabolic_at(b.spec1, Q(q));
  const RootSubset* p2 = parabolic_at(b.spec2, Q(p));
  const RootSubset* q2 = parabolic_at(b.spec2, Q(q));
  c.conditions_match = q1 && p2 && q2 && *q1 == *theta && *p2 == *theta && *q2 == image;

  bool rows_ok = true;
  for (u64 r : {p, q}) {
    ParabolicPrimeRow row;
    row.p = r;
    row.lines = line_count(theta->n, r);
    const ParabolicSpec P(r, *theta), S(r, image);
    row.fixed_theta = fixed_lines(P);
    row.fixed_image = fixed_lines(S);
    row.order_theta = parabolic_order(P);
    row.order_image = parabolic_order(S);
    rows_ok = rows_ok && row.fixed_theta != row.fixed_image && row.order_theta == row.order_image;
    c.rows.push_back(std::move(row));
  }
  bool corrupt = false;
  if (const auto* g = std::get_if<GraphAutAtPlace>(&b.twist)) corrupt = g->corrupt_w0;
  c.w0_determinant = GraphAutomorphism(theta->n, q, corrupt).w0_determinant();
  c.holds = !c.theta_invariant && rows_ok && c.conditions_match && c.w0_determinant == 1;
  return c;
}

GaloisCertificate galois_certificate(const WitnessBundle& b) {
  GaloisCertificate c;
  c.d = b.params.d.value();
  const auto [p1, p2] = PrimePlace::split_pair(b.params.p.value(), c.d);
  const auto [q1, q2] = PrimePlace::split_pair(b.params.q.value(), c.d);
  c.involution = true;
  for (const auto& v : {p1, p2, q1, q2}) {
    GaloisRow row{v, conj_place(v), splitting_type(v.p, c.d).roots};
    c.involution = c.involution && conj_place(row.image) == v;
    c.rows.push_back(std::move(row));
  }
  c.swaps_p = conj_place(p1) == p2 && conj_place(p2) == p1;
  c.moves_q = conj_place(q1) == q2 && !(q2 == q1);
  c.conditions_match = b.spec1.condition_at(p1) && !b.spec1.condition_at(p2) && b.spec2.condition_at(p2) &&
                       !b.spec2.condition_at(p1) && b.spec1.condition_at(q1) && b.spec2.condition_at(q1) &&
                       !b.spec1.condition_at(q2) && !b.spec2.condition_at(q2);
  c.holds = c.swaps_p && c.moves_q && c.involution && c.conditions_match;
  return c;
}

std::vector<std::string> narrative(const WitnessBundle& b) {
  switch (b.method) {
    case Method::A:
    case Method::S16: {
      std::vector<std::string> out{
          "The first quotient contains the central element of order m at p and not at q; the second the reverse.",
          "Inner, diagonal and graph twists fix the centre place by place, and over Q no field automorphism "
          "relabels places, so no automorphism of SL_n carries one pattern to the other.",
          "The finite-level twist moves the central factor from p to q; it is an isomorphism of the quotients "
          "only."};
      if (b.method == Method::S16) {
        out.push_back("Inverting p changes nothing at levels prime to p, so the quotients do not depend on p = " +
                      std::to_string(b.params.p.value_or(0)) + ".");
      }
      return out;
    }
    case Method::B:
      return {
          "theta is moved by the diagram symmetry; P_theta and P_s(theta) have equal orders but fix different "
          "numbers of lines, so they are not conjugate.",
          "An isomorphism of the arithmetic groups would come from one algebraic automorphism acting at every "
          "place: an inner twist keeps the class of the parabolic at q, and the graph twist changes it at p too, "
          "where both subgroups impose theta.",
          "At finite level the graph automorphism is applied at q alone."};
    case Method::C:
      return {"Conjugation is the only nontrivial automorphism of Q(sqrt d); it swaps the two places over p and "
              "the two over q.",
              "Both subgroups impose their condition at the same place over q, so conjugation cannot carry one "
              "to the other; the finite-level swap acts over p alone."};
  }
  return {};
}

}  // namespace

ObstructionReport obstruction_report(const WitnessBundle& b) {
  const FiniteQuotientGroup g1(b.spec1, b.level), g2(b.spec2, b.level);
  ObstructionReport r;
  r.method = b.method;
  r.separating_element = g1.identity();
  switch (b.method) {
    case Method::A:
    case Method::S16: {
      const u64 p = b.method == Method::A ? b.params.p.value() : 3;
      const u64 q = b.method == Method::A ? b.params.q.value() : 5;
      const u64 m = b.params.m.value_or(2);
      r.certificate = central_certificate(g1, g2, Q(p), Q(q), m);
      r.separating_element = g1.central_element(Q(p), m);
      r.twist_choice = "zeta_p^k -> zeta_q^k, zeta the smallest primitive root raised to phi/m at each place";
      break;
    }
    case Method::B: {
      r.certificate = parabolic_certificate(b);
      const u64 q = b.params.q.value();
      const auto idx = g1.index_of(Q(q)).value();
      r.separating_element[idx] = elementary(g1.n(), g1.n() - 1, g1.n() - 2, 1, g1.factors()[idx].modulus);
      r.twist_choice = "graph automorphism g -> w0 (g^T)^-1 w0^-1 at q";
      break;
    }
    case Method::C: {
      r.certificate = galois_certificate(b);
      const auto p2 = PrimePlace::split_pair(b.params.p.value(), b.params.d.value()).second;
      const auto idx = g1.index_of(p2).value();
      r.separating_element[idx] = elementary(g1.n(), 0, 1, 1, g1.factors()[idx].modulus);
      r.twist_choice = "exchange of the components at the two places over p";
      break;
    }
  }
  r.separating_in_first = g1.member(r.separating_element);
  r.separating_in_second = g2.member(r.separating_element);
  r.narrative = narrative(b);
  r.claim_status = kClaimStatus;
  return r;
}

}  // namespace profin
