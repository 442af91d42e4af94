#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "profin/congruence.hpp"

using namespace profin;

namespace {

PrimePlace Q(u64 p) { return PrimePlace::rational(p); }

// Brute-force membership for 2x2 conditions, written directly on entries.
bool oracle_member(const LocalCondition& c, const oracle::Mat2& g, u64 p) {
  if (std::holds_alternative<Full>(c)) return true;
  if (const auto* pr = std::get_if<Principal>(&c)) {
    const u64 q = oracle::ipow(p, pr->e);
    return g.a % q == 1 % q && g.d % q == 1 % q && g.b % q == 0 && g.c % q == 0;
  }
  if (const auto* cp = std::get_if<CentralPrincipal>(&c)) {
    const u64 q = oracle::ipow(p, cp->e);
    if (g.b % q || g.c % q || g.a % q != g.d % q) return false;
    u64 x = 1;
    for (u64 k = 0; k < cp->m; ++k) x = x * g.a % q;
    return x == 1 % q;
  }
  return g.c % p == 0;  // Borel is the only proper parabolic at n = 2
}

u64 det3(const std::vector<u64>& a, u64 m) {
  auto at = [&](int i, int j) { return a[i * 3 + j]; };
  u64 pos = at(0, 0) * at(1, 1) * at(2, 2) + at(0, 1) * at(1, 2) * at(2, 0) + at(0, 2) * at(1, 0) * at(2, 1);
  u64 neg = at(0, 2) * at(1, 1) * at(2, 0) + at(0, 0) * at(1, 2) * at(2, 1) + at(0, 1) * at(1, 0) * at(2, 2);
  return (pos % m + m - neg % m) % m;
}

}  // namespace

TEST_CASE("subgroup spec validation") {
  CHECK_NOTHROW(SubgroupSpec::make(4, 0, {{Q(5), CentralPrincipal{2, 1}}, {Q(7), Principal{1}}}));
  CHECK_THROWS_AS(SubgroupSpec::make(4, 0, {{Q(7), CentralPrincipal{4, 1}}}), InputError);
  CHECK_THROWS_AS(SubgroupSpec::make(4, 0, {{Q(5), Full{}}, {Q(5), Principal{1}}}), InputError);
  CHECK_THROWS_AS(SubgroupSpec::make(4, 0, {{Q(5), ParabolicPullback{RootSubset::borel(3)}}}), InputError);
  CHECK_THROWS_AS(SubgroupSpec::make(4, 0, {{Q(5), Principal{0}}}), InputError);
  CHECK_THROWS_AS(SubgroupSpec::make(1, 0, {}), InputError);

  auto [v1, v2] = PrimePlace::split_pair(7, 2);
  CHECK_NOTHROW(SubgroupSpec::make(2, 2, {{v1, Principal{1}}}));
  CHECK_THROWS_AS(SubgroupSpec::make(2, 0, {{v1, Principal{1}}}), InputError);
  CHECK_THROWS_AS(SubgroupSpec::make(2, 2, {{Q(7), Principal{1}}}), InputError);
  const PrimePlace inert{5, PlaceKind::inert, std::nullopt, "5"};
  CHECK_THROWS_AS(SubgroupSpec::make(2, 2, {{inert, Principal{1}}}), InputError);

  // conditions come back sorted by place
  auto s = SubgroupSpec::make(2, 0, {{Q(7), Principal{1}}, {Q(3), Full{}}});
  CHECK(s.conditions.front().first == Q(3));
  CHECK(s.condition_at(Q(5)) == nullptr);
}

TEST_CASE("level validation") {
  auto s = SubgroupSpec::make(2, 0, {{Q(5), Principal{2}}});
  CHECK_THROWS_AS(FiniteQuotientGroup(s, {{Q(5), 1}}), InputError);
  CHECK_THROWS_AS(FiniteQuotientGroup(s, {{Q(7), 1}}), InputError);
  CHECK_THROWS_AS(FiniteQuotientGroup(s, {{Q(5), 2}, {Q(5), 3}}), InputError);
  CHECK_NOTHROW(FiniteQuotientGroup(s, {{Q(5), 2}, {Q(7), 1}}));
}

TEST_CASE("local orders of 2x2 conditions match brute-force counts") {
  struct Case {
    LocalCondition c;
    u64 p;
    unsigned e;
  };
  const std::vector<Case> cases{
      {Full{}, 3, 2},
      {Principal{1}, 3, 2},
      {Principal{2}, 3, 2},
      {CentralPrincipal{2, 1}, 3, 1},
      {CentralPrincipal{2, 1}, 3, 2},
      {CentralPrincipal{2, 2}, 3, 2},
      {ParabolicPullback{RootSubset::borel(2)}, 3, 1},
      {ParabolicPullback{RootSubset::borel(2)}, 3, 2},
      {Full{}, 5, 1},
      {CentralPrincipal{2, 1}, 5, 1},
      {CentralPrincipal{2, 1}, 5, 2},
      {Principal{1}, 5, 2},
      {ParabolicPullback{RootSubset::borel(2)}, 5, 2},
      {CentralPrincipal{2, 1}, 7, 1},
      {ParabolicPullback{RootSubset::borel(2)}, 7, 1},
  };
  for (const auto& [c, p, e] : cases) {
    CAPTURE(describe(c));
    CAPTURE(p);
    CAPTURE(e);
    const u64 q = oracle::ipow(p, e);
    u64 count = 0;
    oracle::for_each_sl2(q, [&](const oracle::Mat2& g) { count += oracle_member(c, g, p); });
    CHECK(local_order(c, 2, p, e) == count);

    // the quotient's membership predicate agrees with the oracle everywhere
    const FiniteQuotientGroup G(SubgroupSpec::make(2, 0, {{Q(p), c}}), {{Q(p), e}});
    u64 mismatches = 0;
    oracle::for_each_sl2(q, [&](const oracle::Mat2& g) {
      const SLMat x = SLMat::from_reduced(2, q, {g.a, g.b, g.c, g.d});
      mismatches += G.member({x}) != oracle_member(c, g, p);
    });
    CHECK(mismatches == 0);

    // and the local generators generate exactly that many elements
    auto all = enumerate_group(G, 100000);
    REQUIRE(all.has_value());
    CHECK(all->size() == count);
  }
}

TEST_CASE("parabolic pullbacks in SL_3(F_3) against brute force") {
  const u64 p = 3;
  std::vector<std::vector<u64>> sl3;
  std::vector<u64> a(9);
  for (u64 code = 0; code < 19683; ++code) {
    u64 c = code;
    for (auto& x : a) {
      x = c % p;
      c /= p;
    }
    if (det3(a, p) == 1) sl3.push_back(a);
  }
  REQUIRE(BigInt(sl3.size()) == sl_order(3, 3, 1));

  for (const auto& theta : {RootSubset::borel(3), RootSubset::from_blocks({1, 2}), RootSubset::from_blocks({2, 1}),
                            RootSubset::full(3)}) {
    const auto blocks = theta.blocks();
    std::vector<std::size_t> block_of;
    for (std::size_t b = 0; b < blocks.size(); ++b) block_of.insert(block_of.end(), blocks[b], b);
    u64 count = 0;
    for (const auto& g : sl3) {
      bool ok = true;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (block_of[i] > block_of[j] && g[i * 3 + j] != 0) ok = false;
      count += ok;
    }
    const LocalCondition c = ParabolicPullback{theta};
    CHECK(local_order(c, 3, p, 1) == count);
    const FiniteQuotientGroup G(SubgroupSpec::make(3, 0, {{Q(p), c}}), {{Q(p), 1}});
    auto all = enumerate_group(G, 100000);
    REQUIRE(all.has_value());
    CHECK(all->size() == count);
  }
}

TEST_CASE("SL_2(Z) maps onto SL_2(Z/m)") {
  for (u64 m = 2; m <= 7; ++m) {
    std::vector<SLMat> gens{SLMat::from_entries(2, m, {0, -1, 1, 0}), SLMat::from_entries(2, m, {1, 1, 0, 1})};
    CHECK(closure_order(gens, 100000) == oracle::count_sl2(m));
  }
}

TEST_CASE("small products: order, enumeration and samples agree") {
  const auto spec = SubgroupSpec::make(2, 0, {{Q(3), CentralPrincipal{2, 1}}, {Q(5), Principal{1}}});
  const FiniteQuotientGroup G(spec, {{Q(3), 1}, {Q(5), 1}});
  CHECK(G.order() == 2);
  auto all = enumerate_group(G, 1000);
  REQUIRE(all.has_value());
  CHECK(all->size() == 2);

  const FiniteQuotientGroup H(spec, {{Q(3), 2}, {Q(5), 1}, {Q(7), 1}});
  CHECK(H.order() == BigInt(2 * 27 * 336));
  auto hall = enumerate_group(H, 100000);
  REQUIRE(hall.has_value());
  CHECK(BigInt(hall->size()) == H.order());
  for (const auto& x : *hall) REQUIRE(H.member(x));
}

TEST_CASE("central presence and orders for the four-dimensional pair") {
  const auto s1 = SubgroupSpec::make(4, 0, {{Q(5), CentralPrincipal{2, 1}}, {Q(7), Principal{1}}});
  const auto s2 = SubgroupSpec::make(4, 0, {{Q(5), Principal{1}}, {Q(7), CentralPrincipal{2, 1}}});
  const Level level{{Q(5), 2}, {Q(7), 2}};
  const FiniteQuotientGroup G1(s1, level), G2(s2, level);
  const BigInt expect = 2 * boost::multiprecision::pow(BigInt(5), 15) * boost::multiprecision::pow(BigInt(7), 15);
  CHECK(G1.order() == expect);
  CHECK(G2.order() == expect);
  CHECK(G1.same_ambient(G2));

  CHECK(G1.central_presence(Q(5), 2));
  CHECK_FALSE(G1.central_presence(Q(7), 2));
  CHECK_FALSE(G2.central_presence(Q(5), 2));
  CHECK(G2.central_presence(Q(7), 2));
  CHECK_THROWS_AS(G1.central_element(Q(11), 2), InputError);
}

TEST_CASE("sampling is deterministic and stays inside the group") {
  const std::vector<std::pair<SubgroupSpec, Level>> groups{
      {SubgroupSpec::make(4, 0, {{Q(5), CentralPrincipal{2, 1}}, {Q(7), Principal{1}}}), {{Q(5), 2}, {Q(7), 2}}},
      {SubgroupSpec::make(4, 0,
                          {{Q(5), ParabolicPullback{RootSubset::from_blocks({1, 3})}},
                           {Q(7), ParabolicPullback{RootSubset::from_blocks({3, 1})}},
                           {Q(3), Principal{1}}}),
       {{Q(3), 1}, {Q(5), 1}, {Q(7), 1}}},
      {SubgroupSpec::make(3, 0, {{Q(7), CentralPrincipal{3, 2}}, {Q(13), Full{}}}), {{Q(7), 3}, {Q(13), 1}}},
      {SubgroupSpec::make(2, 0, {{Q(3), ParabolicPullback{RootSubset::borel(2)}}}), {{Q(3), 3}}},
  };
  for (const auto& [spec, level] : groups) {
    const FiniteQuotientGroup G(spec, level);
    for (const auto& g : G.generators()) CHECK(G.member(g));
    std::set<std::vector<std::vector<u64>>> distinct;
    for (u64 i = 0; i < 500; ++i) {
      const auto x = G.sample(child_seed(42, i));
      REQUIRE(G.member(x));
      REQUIRE(x == G.sample(child_seed(42, i)));
      std::vector<std::vector<u64>> key;
      for (const auto& m : x) key.push_back(m.entries());
      distinct.insert(key);
    }
    CHECK(distinct.size() > 400);
  }
}

TEST_CASE("child seeds") {
  CHECK(child_seed(0, 0) == child_seed(0, 0));
  std::set<u64> seen;
  for (u64 i = 0; i < 10000; ++i) seen.insert(child_seed(7, i));
  CHECK(seen.size() == 10000);
  CHECK(child_seed(0, 1) != child_seed(1, 0));
}

TEST_CASE("reduction of global matrices") {
  const auto spec = SubgroupSpec::make(2, 0, {{Q(5), Principal{1}}});
  const FiniteQuotientGroup G(spec, {{Q(5), 2}, {Q(7), 1}});
  const std::vector<i64> t{1, 5, 0, 1};
  auto x = G.reduce_global(std::span<const i64>(t));
  CHECK(G.member(x));
  const std::vector<i64> s{0, -1, 1, 0};
  CHECK_FALSE(G.member(G.reduce_global(std::span<const i64>(s))));

  auto [v1, v2] = PrimePlace::split_pair(7, 2);
  const FiniteQuotientGroup H(SubgroupSpec::make(2, 2, {{v1, Principal{1}}}), {{v1, 1}, {v2, 1}});
  // 1 + sqrt2 is a unit with inverse -1 + sqrt2
  const std::vector<QuadInt> u{QuadInt(1, 1, 2), QuadInt(0, 0, 2), QuadInt(0, 0, 2), QuadInt(-1, 1, 2)};
  auto y = H.reduce_global(std::span<const QuadInt>(u));
  CHECK(y[0] == SLMat::from_entries(2, 7, {4, 0, 0, 2}));
  CHECK(y[1] == SLMat::from_entries(2, 7, {5, 0, 0, 3}));
  CHECK_FALSE(H.member(y));
  // [[1, 7 sqrt2], [0, 1]] is trivial at both places above 7
  const std::vector<QuadInt> w{QuadInt(1, 0, 2), QuadInt(0, 7, 2), QuadInt(0, 0, 2), QuadInt(1, 0, 2)};
  CHECK(H.member(H.reduce_global(std::span<const QuadInt>(w))));
}
