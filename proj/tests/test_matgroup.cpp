#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "profin/matgroup.hpp"

using namespace profin;

namespace {

SLMat random_sl(std::size_t n, u64 m, std::mt19937_64& rng) {
  SLMat g = SLMat::identity(n, m);
  for (int k = 0; k < 24; ++k) {
    std::size_t i = rng() % n, j = rng() % (n - 1);
    if (j >= i) ++j;
    g = g * elementary(n, i, j, static_cast<i64>(rng() % m), m);
  }
  return g;
}

}  // namespace

TEST_CASE("construction enforces determinant one") {
  CHECK_NOTHROW(SLMat::from_entries(2, 5, {2, 0, 0, 3}));
  CHECK_THROWS_AS(SLMat::from_entries(2, 5, {2, 0, 0, 2}), InputError);
  CHECK_THROWS_AS(SLMat::from_entries(2, 5, {1, 0, 0}), InputError);
  CHECK_THROWS_AS(SLMat::identity(2, u64{1} << 31), InputError);
  const SLMat neg = SLMat::from_entries(2, 7, {-1, 0, 0, -1});
  CHECK(neg.at(0, 0) == 6);
}

TEST_CASE("mat_mul and mat_inv") {
  const SLMat id = SLMat::identity(4, 25);
  const SLMat e12 = elementary(4, 0, 1, 1, 25);
  CHECK(id * e12 == e12);
  CHECK(mat_inv(e12) == elementary(4, 0, 1, -1, 25));

  std::mt19937_64 rng(3);
  for (u64 m : {5ULL, 25ULL, 7ULL, 49ULL, 35ULL, 289ULL}) {
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
      for (int k = 0; k < (n == 5 ? 100 : 1000); ++k) {
        SLMat x = random_sl(n, m, rng);
        REQUIRE((x * mat_inv(x)).is_identity());
        REQUIRE((mat_inv(x) * x).is_identity());
      }
    }
  }
}

TEST_CASE("products agree with the plain oracle product") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    SLMat x = random_sl(4, 49, rng), y = random_sl(4, 49, rng);
    CHECK((x * y).entries() == oracle::matmul(4, 49, x.entries(), y.entries()));
  }
}

TEST_CASE("determinant over composite moduli for n > 4 matches the Laplace route") {
  std::mt19937_64 rng(11);
  for (u64 m : {12ULL, 25ULL, 35ULL, 343ULL}) {
    for (int k = 0; k < 200; ++k) {
      raw::Entries a(25);
      for (auto& x : a) x = rng() % m;
      // a 5x5 determinant by expansion along the first row, 4x4 minors via the n <= 4 path
      u64 expect = 0;
      for (std::size_t c = 0; c < 5; ++c) {
        raw::Entries minor;
        for (std::size_t r = 1; r < 5; ++r)
          for (std::size_t j = 0; j < 5; ++j)
            if (j != c) minor.push_back(a[r * 5 + j]);
        u64 term = mul_mod(a[c], raw::det(4, m, minor), m);
        expect = c % 2 == 0 ? add_mod(expect, term, m) : sub_mod(expect, term, m);
      }
      REQUIRE(raw::det(5, m, a) == expect);
    }
  }
}

TEST_CASE("elementary matrices") {
  CHECK(elementary(4, 0, 1, 1, 5).at(0, 1) == 1);
  CHECK(elementary(4, 0, 1, 5, 25).at(0, 1) == 5);
  CHECK_THROWS_AS(elementary(4, 1, 1, 1, 5), InputError);
  for (i64 s : {0, 1, 3, 24}) {
    for (i64 t : {0, 2, 7, 24}) {
      CHECK(elementary(3, 2, 0, s, 25) * elementary(3, 2, 0, t, 25) == elementary(3, 2, 0, s + t, 25));
    }
  }
}

TEST_CASE("sl_order matches brute force") {
  CHECK(sl_order(2, 5, 1) == 120);
  CHECK(sl_order(2, 2, 2) == 48);
  CHECK(sl_order(4, 5, 1) == BigInt("29016000000"));
  for (u64 p : {2, 3, 5, 7}) {
    CHECK(sl_order(2, p, 1) == oracle::count_sl2(p));
    CHECK(sl_order(2, p, 1) == p * (p * p - 1));
  }
  CHECK(sl_order(2, 3, 2) == oracle::count_sl2(9));
  CHECK(sl_order(2, 2, 3) == oracle::count_sl2(8));
}

TEST_CASE("central elements") {
  CHECK(minus_identity(4, 5) == scalar_matrix(4, 5, 4));
  CHECK(minus_identity(2, 7).at(0, 0) == 6);
  CHECK_THROWS_AS(minus_identity(3, 7), InputError);

  CHECK(central_scalar(4, 5, 1, 4) == scalar_matrix(4, 5, 2));
  CHECK(central_scalar(4, 7, 1, 2) == scalar_matrix(4, 7, 6));
  CHECK_THROWS_AS(central_scalar(4, 7, 1, 4), InputError);

  SUBCASE("canonical roots have the requested order at every level") {
    for (u64 p : {5, 7, 13, 17}) {
      for (unsigned e : {1u, 2u, 3u}) {
        for (u64 m = 1; m <= p - 1; ++m) {
          if ((p - 1) % m) continue;
          const u64 q = oracle::ipow(p, e);
          const u64 z = canonical_root_of_unity(p, e, m);
          CHECK(multiplicative_order(z, q, q / p * (p - 1)) == m);
          if (e > 1) CHECK(z % p == canonical_root_of_unity(p, 1, m));
        }
      }
    }
  }
}

TEST_CASE("reduction and CRT compatibility") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 1000; ++k) {
    SLMat x = random_sl(4, 125, rng), y = random_sl(4, 125, rng);
    REQUIRE(reduce_mod(x * y, 25) == reduce_mod(x, 25) * reduce_mod(y, 25));
  }
  const std::vector<u64> moduli{25, 7};
  for (int k = 0; k < 1000; ++k) {
    SLMat x = random_sl(3, 175, rng), y = random_sl(3, 175, rng);
    auto xs = crt_split(x, moduli), ys = crt_split(y, moduli), xys = crt_split(x * y, moduli);
    REQUIRE(xys[0] == xs[0] * ys[0]);
    REQUIRE(xys[1] == xs[1] * ys[1]);
    REQUIRE(crt_join(xs) == x);
  }
}

TEST_CASE("batch_mul equals elementwise products") {
  std::mt19937_64 rng(19);
  std::vector<SLMat> xs, ys;
  for (int k = 0; k < 37; ++k) {
    xs.push_back(random_sl(4, 289, rng));
    ys.push_back(random_sl(4, 289, rng));
  }
  auto zs = batch_mul(xs, ys);
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(zs[k] == xs[k] * ys[k]);
}

TEST_CASE("projective lines") {
  CHECK(lines_of_projective_space(4, 5).size() == 156);
  CHECK(lines_of_projective_space(4, 7).size() == 400);
  CHECK(lines_of_projective_space(2, 3).size() == 4);

  const auto lines = lines_of_projective_space(3, 5);
  for (std::size_t k = 0; k < lines.size(); ++k) CHECK(line_index(lines[k], 5) == k);

  const SLMat id = SLMat::identity(4, 5);
  for (const auto& l : lines_of_projective_space(4, 5)) CHECK(act(id, l) == l);

  SUBCASE("group action law") {
    std::mt19937_64 rng(23);
    const auto ls = lines_of_projective_space(4, 5);
    for (int k = 0; k < 300; ++k) {
      SLMat g = random_sl(4, 5, rng), h = random_sl(4, 5, rng);
      const auto& l = ls[rng() % ls.size()];
      REQUIRE(act(g * h, l) == act(g, act(h, l)));
    }
  }

  SUBCASE("transitive for SL_4(F_5)") {
    std::vector<SLMat> gens;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) gens.push_back(elementary(4, i, j, 1, 5));
    const auto ls = lines_of_projective_space(4, 5);
    std::vector<char> seen(ls.size(), 0);
    std::vector<ProjPoint> stack{ls[0]};
    seen[0] = 1;
    std::size_t orbit = 1;
    while (!stack.empty()) {
      ProjPoint l = stack.back();
      stack.pop_back();
      for (const auto& g : gens) {
        ProjPoint m = act(g, l);
        std::size_t idx = line_index(m, 5);
        if (!seen[idx]) {
          seen[idx] = 1;
          ++orbit;
          stack.push_back(m);
        }
      }
    }
    CHECK(orbit == 156);
  }
}
