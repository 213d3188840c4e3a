#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diffcover/numbers.hpp"
#include "diffcover/quadratic.hpp"
#include "oracles.hpp"

using namespace diffcover;

TEST_CASE("rational serialization round trip, lowest terms, sign on numerator") {
  CHECK(rat_str(make_rat(2, 4)) == "1/2");
  CHECK(rat_str(make_rat(-2, 4)) == "-1/2");
  CHECK(rat_str(Rat(0)) == "0/1");
  CHECK(rat_str(Rat(7)) == "7/1");
  CHECK(rat_parse("3/4") == make_rat(3, 4));
  CHECK(rat_parse("-3/4") == make_rat(-3, 4));
  CHECK(rat_parse("5") == Rat(5));
  CHECK_THROWS_AS(rat_parse("3/0"), ConfigError);
  CHECK_THROWS_AS(rat_parse("x"), ConfigError);
}

TEST_CASE("unit dyadics") {
  CHECK(unit_dyadic(0) == Rat(1));
  CHECK(unit_dyadic(5) == make_rat(1, 32));
  CHECK(rat_str(DyadicCap{4}.value()) == "1/16");
}

TEST_CASE("p-adic valuation") {
  CHECK(padic_valuation(2, Int(-4)) == 2);
  CHECK(padic_valuation(2, Int(1)) == 0);
  CHECK(padic_valuation(3, Int(18)) == 2);
  CHECK(padic_valuation(5, Int(250)) == 3);
  CHECK_THROWS_AS(padic_valuation(2, Int(0)), ContractViolation);
}

TEST_CASE("floor of b*sqrt5") {
  CHECK(floor_mul_sqrt5(Int(0)) == 0);
  CHECK(floor_mul_sqrt5(Int(1)) == 2);    // sqrt5 = 2.236...
  CHECK(floor_mul_sqrt5(Int(4)) == 8);    // 8.944...
  CHECK(floor_mul_sqrt5(Int(-1)) == -3);  // -2.236... floors to -3
  CHECK(floor_mul_sqrt5(Int(-4)) == -9);
}

TEST_CASE("prime power ladder versus exact powers") {
  for (unsigned p : {2u, 3u, 5u, 97u}) {
    PrimePowerLadder ladder(p);
    for (std::uint64_t m : {0ull, 1ull, 7ull, 40ull, 200ull}) {
      const std::uint64_t k = ladder.min_exp_exceeding_pow2(m);
      Int pk, pk1;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
      Int two_m = 1;
      mpz_mul_2exp(two_m.get_mpz_t(), two_m.get_mpz_t(), m);
      CHECK(pk > two_m);
      if (k > 0) {
        mpz_ui_pow_ui(pk1.get_mpz_t(), p, static_cast<unsigned long>(k - 1));
        CHECK(pk1 <= two_m);
      }
    }
    // Non-monotone query order exercises the downward walk.
    CHECK(ladder.min_exp_exceeding_pow2(3) > 0);
    CHECK(ladder.pow_exceeds_pow2(4, 3) == [&] {
      Int v;
      mpz_ui_pow_ui(v.get_mpz_t(), p, 4);
      return v > 8;
    }());
  }
}

TEST_CASE("unit fraction sums are exact") {
  UnitFractionSum s(2);
  s.add(5);
  s.add(5);
  CHECK(s.value() == make_rat(1, 16));
  s.add(3);  // smaller level after larger
  CHECK(s.value() == make_rat(3, 16));
  s.add_multiple(10, 4);
  CHECK(s.value() == make_rat(3, 16) + make_rat(4, 1024));

  UnitFractionSum t(3);
  t.add(0);
  t.add(2);
  t.add(4);
  CHECK(t.value() == Rat(1) + make_rat(1, 9) + make_rat(1, 81));
}

TEST_CASE("quadratic field signs agree with 100-digit evaluation") {
  std::mt19937 rng(20250810);
  std::uniform_int_distribution<long> num(-2000, 2000);
  std::uniform_int_distribution<long> den(1, 500);
  for (int i = 0; i < 2000; ++i) {
    Rat a = make_rat(num(rng), den(rng));
    Rat b = make_rat(num(rng), den(rng));
    QRoot5 v(a, b);
    auto expected = oracles::mpfr_sign_sqrt5(a, b);
    REQUIRE(expected.has_value());
    CHECK(v.sign() == *expected);
  }
}

TEST_CASE("quadratic floor is exact") {
  // phi = (sqrt5 - 1)/2 = 0.618...
  QRoot5 phi(make_rat(-1, 2), make_rat(1, 2));
  CHECK(phi.floor() == 0);
  QRoot5 big(make_rat(-7, 2), make_rat(7, 2));  // 7*phi = 4.326...
  CHECK(big.floor() == 4);
  QRoot5 neg(make_rat(7, 2), make_rat(-7, 2));  // -4.326...
  CHECK(neg.floor() == -5);
  QRoot5 rat_only(make_rat(-9, 4), Rat(0));
  CHECK(rat_only.floor() == -3);
  CHECK(QRoot5(Rat(3), Rat(0)).floor() == 3);
}

TEST_CASE("quadratic comparison against tiny dyadics uses the exact gate") {
  QRoot5 phi(make_rat(-1, 2), make_rat(1, 2));
  CHECK(phi.cmp(unit_dyadic(200000)) > 0);  // huge denominator, fast path
  CHECK(phi.cmp(make_rat(1, 2)) > 0);
  CHECK(phi.cmp(Rat(1)) < 0);
  QRoot5 tiny(make_rat(-161, 72), make_rat(1, 1));  // sqrt5 - 161/72 = about -2.7e-5
  CHECK(tiny.sign() < 0);
  CHECK(tiny.cmp(unit_dyadic(100)) < 0);
}

TEST_CASE("fnv digest is stable") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
  CHECK(fnv1a_hex("config") == fnv1a_hex("config"));
}
