#include "irratlab/digits.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <numeric>
#include <random>

using namespace irratlab;
using namespace irratlab::digits;

namespace {

std::vector<std::uint8_t> v(std::initializer_list<int> xs) {
  std::vector<std::uint8_t> out;
  for (int x : xs) out.push_back(static_cast<std::uint8_t>(x));
  return out;
}

// multiplicative order of b mod q, by brute force
unsigned order_mod(unsigned b, unsigned q) {
  if (q == 1) return 1;
  unsigned x = b % q, k = 1;
  while (x != 1) {
    x = x * b % q;
    ++k;
  }
  return k;
}

}  // namespace

TEST(DigitCount, Examples) {
  EXPECT_EQ(digit_count(999, 10), 3u);
  EXPECT_EQ(digit_count(1000, 10), 4u);
  EXPECT_EQ(digit_count(7, 2), 3u);
  EXPECT_EQ(digit_count(1, 2), 1u);
  EXPECT_THROW(digit_count(0, 10), PreconditionError);
}

TEST(DigitCount, MatchesDecimalStringsAndBoundaries) {
  for (unsigned b = 2; b <= 37; ++b) {
    Integer p = 1;
    for (unsigned k = 1; k < 60; ++k) {
      // p = b^(k-1): first k-digit number; p*b - 1 the last
      EXPECT_EQ(digit_count(p, b), k) << b << "^" << k - 1;
      EXPECT_EQ(digit_count(p * b - 1, b), k);
      p *= b;
    }
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Integer n(static_cast<unsigned long>(rng() >> (rng() % 60)) | 1UL);
    EXPECT_EQ(digit_count(n, 10), n.get_str().size());
    EXPECT_EQ(digit_count(n, 16), n.get_str(16).size());
  }
}

TEST(ToDigits, AgreesWithGmpStrings) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 300; ++i) {
    const Integer n(static_cast<unsigned long>(rng()));
    const unsigned b = 2 + static_cast<unsigned>(rng() % 35);
    const std::string s = n.get_str(static_cast<int>(b));
    const auto d = to_digits(n, b);
    ASSERT_EQ(d.size(), s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      const int c = std::isdigit(s[k]) ? s[k] - '0' : s[k] - 'a' + 10;
      EXPECT_EQ(d[k], c);
    }
  }
}

TEST(ProperPower, Flags) {
  for (unsigned b : {4u, 8u, 9u, 16u, 27u, 32u, 36u, 100u}) EXPECT_TRUE(is_proper_power(b)) << b;
  for (unsigned b : {2u, 3u, 6u, 10u, 12u, 18u, 20u}) EXPECT_FALSE(is_proper_power(b)) << b;
}

TEST(Sequence, Grammar) {
  EXPECT_EQ(Sequence::parse("n")(17), 17);
  EXPECT_EQ(Sequence::parse("repunit")(4), 1111);
  EXPECT_EQ(Sequence::parse("repunit", 2)(4), 15);
  EXPECT_EQ(Sequence::parse("repunit:3")(3), 13);
  EXPECT_EQ(Sequence::parse("pow:2")(10), 1024);
  EXPECT_EQ(Sequence::parse("poly:x^2+1")(5), 26);
  const auto fib = Sequence::parse("linrec:1,1;1,1");
  EXPECT_EQ(fib(10), 55);
  EXPECT_EQ(fib(3), 2);
  // repunit as a recurrence: f(n+1) = 10 f(n) + 1
  const auto rep = Sequence::parse("linrec:10;1;1");
  for (unsigned n = 1; n < 30; ++n) EXPECT_EQ(rep(n), Sequence::parse("repunit")(n));
  const auto t = Sequence::parse("table:3,1,4");
  EXPECT_EQ(t(3), 4);
  EXPECT_THROW(t(4), CapacityError);
  EXPECT_THROW(Sequence::parse("bogus"), PreconditionError);
  EXPECT_THROW(Sequence::parse("linrec:1,1;1"), PreconditionError);
  EXPECT_THROW(Sequence::parse("n")(0), PreconditionError);
}

TEST(BuildStream, Examples) {
  EXPECT_EQ(build_stream(Sequence::parse("n"), 10, 11).digits(),
            v({1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0}));
  auto rep = build_stream(Sequence::parse("repunit"), 10, 6);
  EXPECT_EQ(std::vector<std::uint8_t>(rep.digits().begin(), rep.digits().begin() + 6),
            v({1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(build_stream(Sequence::parse("pow:2"), 2, 9).digits(), v({1, 0, 1, 0, 0, 1, 0, 0, 0}));
}

TEST(BuildStream, NonPositiveValueRejected) {
  EXPECT_THROW(build_stream(Sequence::parse("poly:x-3"), 10, 5), PreconditionError);
  EXPECT_THROW(build_stream(Sequence::parse("table:1,0"), 10, 5), PreconditionError);
}

TEST(BuildStream, PositionArithmeticAndBlocks) {
  for (const char* spec : {"n", "repunit", "pow:3", "poly:x^3+2", "linrec:1,1;1,2"}) {
    for (unsigned b : {2u, 7u, 10u, 16u}) {
      const auto s = build_stream(Sequence::parse(spec, b), b, 2000);
      const auto& f = s.sequence();
      std::uint64_t pos = 1;
      for (std::uint64_t n = 1; n <= s.blocks(); ++n) {
        ASSERT_EQ(s.block_starts()[n - 1], pos) << spec << " b=" << b << " n=" << n;
        const std::uint64_t len = digit_count(f(n), b);
        EXPECT_NE(s.digits()[pos - 1], 0) << "leading zero";
        EXPECT_EQ(s.block_of(pos), n);
        EXPECT_EQ(s.block_of(pos + len - 1), n);
        pos += len;
      }
      EXPECT_EQ(pos - 1, s.digits().size());
      EXPECT_GE(s.digits().size(), 2000u);
      for (auto d : s.digits()) EXPECT_LT(d, b);
    }
  }
}

TEST(BuildStream, Rendering) {
  auto s = build_stream(Sequence::parse("n"), 10, 12);
  EXPECT_EQ(s.str(), "1234567891011");  // whole blocks
  EXPECT_EQ(s.str(true), "1|2|3|4|5|6|7|8|9|10|11");
}

TEST(ExpandRational, LongDivision) {
  EXPECT_EQ(expand_rational(Rational(Integer(1), Integer(7)), 10, 6), v({1, 4, 2, 8, 5, 7}));
  EXPECT_EQ(expand_rational(Rational(Integer(1), Integer(4)), 10, 4), v({2, 5, 0, 0}));
  EXPECT_EQ(expand_rational(Rational(Integer(1), Integer(3)), 2, 4), v({0, 1, 0, 1}));
  EXPECT_THROW(expand_rational(Rational(1), 10, 3), PreconditionError);
}

TEST(DetectPeriod, Examples) {
  const auto rep = build_stream(Sequence::parse("repunit"), 10, 1000);
  const auto r = detect_period(rep, 50, 50);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.s, 0u);
  EXPECT_EQ(r.p, 1u);
  EXPECT_EQ(r.reconstructed, Rational(Integer(1), Integer(9)));
  EXPECT_EQ(r.verified_digits, rep.digits().size());

  const auto sevens = detect_period(std::vector<std::uint8_t>(200, 7), 10, 20, 20);
  ASSERT_TRUE(sevens.found);
  EXPECT_EQ(sevens.s, 0u);
  EXPECT_EQ(sevens.p, 1u);
  EXPECT_EQ(sevens.reconstructed, Rational(Integer(7), Integer(9)));

  const auto champ = build_stream(Sequence::parse("n"), 10, 10000);
  EXPECT_FALSE(detect_period(champ, 50, 50).found);
}

TEST(DetectPeriod, InsufficientDigitsNamesCount) {
  try {
    detect_period(std::vector<std::uint8_t>(100, 1), 10, 10, 40);
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("130"), std::string::npos) << e.what();
  }
}

TEST(DetectPeriod, PreperiodAndMinimality) {
  // 0.12(345)
  auto d = v({1, 2});
  for (int i = 0; i < 30; ++i) d.insert(d.end(), {3, 4, 5});
  const auto r = detect_period(d, 10, 10, 10);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.s, 2u);
  EXPECT_EQ(r.p, 3u);
  EXPECT_EQ(r.reconstructed, Rational::parse("12/100") + Rational::parse("345/99900"));
  // not enough preperiod allowed
  EXPECT_FALSE(detect_period(d, 10, 1, 10).found);
  // disturbing the last digit breaks every candidate that reaches it
  d.back() = 9;
  const auto broken = detect_period(d, 10, 10, 10);
  EXPECT_FALSE(broken.found);
}

TEST(DetectPeriod, RoundTripAllSmallDenominators) {
  for (unsigned b : {10u, 2u, 7u}) {
    for (unsigned q = 1; q <= 50; ++q) {
      if (std::gcd(q, b) != 1) continue;
      const unsigned bound = q;  // order of b mod q is at most q - 1
      ASSERT_LE(order_mod(b, q), bound);
      for (unsigned a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1 && !(a == 0 && q == 1)) continue;
        const Rational x{Integer(a), Integer(q)};
        const auto d = expand_rational(x, b, 4 * bound);
        const auto r = detect_period(d, b, bound, bound);
        ASSERT_TRUE(r.found) << a << "/" << q;
        EXPECT_EQ(r.reconstructed, x) << a << "/" << q << " base " << b;
        EXPECT_EQ(r.s, 0u);
        EXPECT_EQ(r.p, order_mod(b, q));
      }
    }
  }
}

TEST(DetectPeriod, SoundOnRandomRationals) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 15);
    const Integer q(static_cast<unsigned long>(2 + rng() % 2000));
    const Integer a(static_cast<unsigned long>(rng() % q.get_ui()));
    const Rational x(a, q);
    const auto d = expand_rational(x, b, 400);
    const auto r = detect_period(d, b, 40, 40);
    if (r.found) {
      EXPECT_EQ(expand_rational(r.reconstructed, b, 400), d);
      for (std::size_t k = r.s; k + r.p < d.size(); ++k) EXPECT_EQ(d[k], d[k + r.p]);
    }
  }
}

TEST(DetectPeriod, Json) {
  const auto rep = build_stream(Sequence::parse("repunit"), 10, 1000);
  const auto j = nlohmann::json::parse(detect_period(rep, 50, 50).json());
  EXPECT_EQ(j["found"], true);
  EXPECT_EQ(j["s"], 0);
  EXPECT_EQ(j["p"], 1);
  EXPECT_EQ(j["num"], 1);
  EXPECT_EQ(j["den"], 9);
  // 1/(10^30 - 1) has a denominator beyond 64 bits
  const auto big = detect_period(
      expand_rational(Rational(Integer(1), ipow(Integer(10), 30) - 1), 10, 200), 10, 10, 40);
  const auto jb = nlohmann::json::parse(big.json());
  EXPECT_EQ(jb["num"], 1);
  EXPECT_EQ(jb["den"], std::string(30, '9'));
  EXPECT_GE(j["verified_digits"].get<int>(), 1000);
}

TEST(RatioCheck, Examples) {
  const auto rep = check_theorem2_conclusion(Sequence::parse("repunit"), 10, 1, 60);
  EXPECT_TRUE(rep.is_power_of_base);
  EXPECT_EQ(rep.nearest_power, 10);
  EXPECT_EQ(rep.c, 10);
  EXPECT_EQ(rep.max_deviation, 1);
  EXPECT_TRUE(rep.bounded_evidence);

  const auto two = check_theorem2_conclusion(Sequence::parse("pow:2"), 2, 1, 60);
  EXPECT_TRUE(two.is_power_of_base);
  EXPECT_EQ(two.c, 2);
  EXPECT_EQ(two.max_deviation, 0);

  const auto three = check_theorem2_conclusion(Sequence::parse("pow:3"), 10, 1, 60);
  EXPECT_FALSE(three.is_power_of_base);
  EXPECT_NEAR(three.limit_estimate, 3.0, 1e-12);
  EXPECT_GT(three.relative_gap, 0.5);
  EXPECT_FALSE(three.bounded_evidence);

  const auto cand = check_theorem2_conclusion(Sequence::parse("pow:3"), 10, 1, 20, Integer(3));
  EXPECT_EQ(cand.max_deviation, 0);
  EXPECT_FALSE(cand.base_proper_power);
  EXPECT_TRUE(check_theorem2_conclusion(Sequence::parse("pow:4"), 4, 1, 5).base_proper_power);
}

TEST(RatioCheck, PeriodicStreamsSatisfyConclusion) {
  // f(n+1) = b^k f(n) + d with small d gives a periodic stream.
  for (const char* spec : {"repunit", "linrec:10;7;0", "linrec:100;12;12", "linrec:10;5;3"}) {
    const auto f = Sequence::parse(spec);
    const auto s = build_stream(f, 10, 3000);
    const auto r = detect_period(s, 50, 50);
    if (!r.found) continue;
    const auto chk = check_theorem2_conclusion(f, 10, 1, 80);
    EXPECT_TRUE(chk.is_power_of_base) << spec;
    EXPECT_TRUE(chk.bounded_evidence) << spec;
  }
  EXPECT_TRUE(detect_period(build_stream(Sequence::parse("linrec:100;12;12"), 10, 3000), 50, 50).found);
}

TEST(RatioCheck, JsonParses) {
  const auto j =
      nlohmann::json::parse(check_theorem2_conclusion(Sequence::parse("repunit"), 10, 1, 20).json());
  EXPECT_EQ(j["c"], "10");
  EXPECT_EQ(j["max_deviation"], "1");
  EXPECT_EQ(j["is_power_of_base"], true);
}
