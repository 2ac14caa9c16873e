#include "irratlab/relations.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "irratlab/primes.hpp"
#include "irratlab/series.hpp"

using namespace irratlab;
using namespace irratlab::relations;

namespace {

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

// Smallest |a|_inf among integer vectors with sum a_i x_i ~ 0 (double precision),
// or 0 if none up to `box`. Only meaningful for relations far above 1e-12.
long brute_relation_box(const std::vector<double>& x, long box) {
  const std::size_t n = x.size();
  for (long r = 1; r <= box; ++r) {
    std::vector<long> a(n, -r);
    while (true) {
      long mx = 0;
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        mx = std::max(mx, std::labs(a[i]));
        s += static_cast<double>(a[i]) * x[i];
      }
      if (mx == r && std::fabs(s) < 1e-9) return r;
      std::size_t k = 0;
      while (k < n && a[k] == r) a[k++] = -r;
      if (k == n) break;
      ++a[k];
    }
  }
  return 0;
}

const primes::PrimeTable& table() {
  static const primes::PrimeTable t(200000);
  return t;
}

}  // namespace

TEST(RealVector, Invariants) {
  EXPECT_THROW(RealVector::exact({Rational(1)}), PreconditionError);
  const auto loose = CertifiedReal::from_ball(Rational(1), Rational::parse("1/1000"), 64);
  EXPECT_THROW(RealVector({loose, loose}, {}, 64), PreconditionError);
  const auto v = RealVector::exact({Rational(1), Rational::parse("1/2")});
  EXPECT_TRUE(v.all_exact());
  EXPECT_EQ(v.labels().size(), 2u);
}

TEST(Pslq, ExactHalf) {
  const auto r = pslq(RealVector::exact({Rational(1), Rational::parse("1/2")}), Integer(10000));
  ASSERT_EQ(r.outcome, PslqResult::Outcome::Relation);
  EXPECT_EQ(r.coefficients, ints({1, -2}));
  EXPECT_TRUE(r.residual.is_zero());
  EXPECT_TRUE(r.exact);
}

TEST(Pslq, SmallRationalTuples) {
  // (1, a/q) has the primitive relation (a, -q) up to sign
  for (long q = 2; q < 40; ++q) {
    for (long a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto r = pslq(RealVector::exact({Rational(1), Rational(Integer(a), Integer(q))}, 160),
                          Integer(1000));
      ASSERT_EQ(r.outcome, PslqResult::Outcome::Relation) << a << "/" << q;
      EXPECT_EQ(r.coefficients, ints({a, -q}));
    }
  }
}

TEST(Pslq, DuplicateEntry) {
  const unsigned bits = digits_to_bits(100);
  const auto e = series::e_value(bits);
  const RealVector v({CertifiedReal::exact_integer(1, bits + 8), e, e}, {"1", "e", "e"}, bits);
  const auto r = pslq(v, Integer(10000));
  ASSERT_EQ(r.outcome, PslqResult::Outcome::Relation);
  EXPECT_EQ(r.coefficients, ints({0, 1, -1}));
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.residual, r.allowance);
}

TEST(Pslq, PrecisionTooLow) {
  try {
    pslq(RealVector::exact({Rational(1), Rational::parse("1/3")}, 80), Integer(10000));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("need 92 bits"), std::string::npos) << e.what();
  }
  EXPECT_EQ(required_bits(3, Integer(10000)), 3u * 14 + 64);
}

TEST(Pslq, IterationCapGivesPartialBound) {
  const auto r = independence_experiment({"1", "e", "S:3/2"}, 200, Integer(10000), nullptr, 1);
  EXPECT_EQ(r.result.outcome, PslqResult::Outcome::Exclusion);
  EXPECT_TRUE(r.result.partial);
  EXPECT_FALSE(r.result.warning.empty());
  EXPECT_LT(r.result.bound, 10000);
}

TEST(Pslq, PlantedLogRelations) {
  std::mt19937_64 rng(2024);
  const unsigned bits = digits_to_bits(100);
  const long ps[] = {2, 3, 5, 7};
  for (int inst = 0; inst < 50; ++inst) {
    std::vector<CertifiedReal> x;
    std::vector<long> c(4);
    CertifiedReal dep = CertifiedReal::exact_integer(0, bits + 24);
    double norm2 = 1;
    for (int i = 0; i < 4; ++i) {
      c[i] = static_cast<long>(rng() % 201) - 100;
      norm2 += static_cast<double>(c[i] * c[i]);
      x.push_back(log_rational(Rational(ps[i]), bits + 24));
      dep = dep + x.back() * Integer(c[i]);
    }
    x.push_back(dep);
    const RealVector v(x, {}, bits);
    const auto r = pslq(v, Integer(100000));
    ASSERT_EQ(r.outcome, PslqResult::Outcome::Relation) << "instance " << inst;
    // (c, -1), normalized so the first nonzero entry is positive
    std::vector<Integer> want;
    for (long ci : c) want.emplace_back(ci);
    want.emplace_back(-1);
    const auto first = std::find_if(want.begin(), want.end(), [](const Integer& z) { return sgn(z) != 0; });
    if (sgn(*first) < 0) {
      for (auto& z : want) z = -z;
    }
    EXPECT_EQ(r.coefficients, want) << "instance " << inst;
    EXPECT_LE(r.bound, std::sqrt(norm2) * (1 + 1e-9));

    // with max_norm below the planted norm, any exclusion must stay below it
    const auto capped = pslq(v, Integer(static_cast<long>(std::sqrt(norm2) / 2) + 1));
    if (capped.outcome == PslqResult::Outcome::Exclusion) {
      EXPECT_LE(capped.bound, std::sqrt(norm2) * (1 + 1e-9)) << "instance " << inst;
    }
  }
}

TEST(Independence, EulerAndS32Excluded) {
  const auto r = independence_experiment({"1", "e", "S:3/2"}, 200, Integer(10000));
  ASSERT_EQ(r.result.outcome, PslqResult::Outcome::Exclusion);
  EXPECT_GE(r.result.bound, 1e4);
  EXPECT_FALSE(r.result.partial);
  ASSERT_EQ(r.constants.size(), 3u);
  EXPECT_EQ(r.constants[0].N, 0u);
  EXPECT_GT(r.constants[1].N, 0u);
  EXPECT_LT(r.constants[2].N, 400u);
  // independent check: no relation with |a|_inf <= 12 in double precision
  std::vector<double> xs;
  for (const auto& c : r.constants) xs.push_back(c.value.to_double());
  EXPECT_EQ(brute_relation_box(xs, 12), 0);
}

TEST(Independence, PrimeSeriesExcluded) {
  const auto r = independence_experiment({"1", "prime:0", "prime:1"}, 200, Integer(10000), &table());
  ASSERT_EQ(r.result.outcome, PslqResult::Outcome::Exclusion);
  EXPECT_GE(r.result.bound, 1e4);
  // S_0 = e - 1
  const auto e = series::e_value(700);
  EXPECT_LT((r.constants[1].value.mid() - (e.mid() - Rational(1))).abs(),
            Rational(Integer(1), Integer(1) << 600));
}

TEST(Independence, PlantedPrimeControl) {
  const auto r = independence_experiment({"1", "prime:0", "e"}, 200, Integer(10000), &table());
  ASSERT_EQ(r.result.outcome, PslqResult::Outcome::Relation);
  EXPECT_EQ(r.result.coefficients, ints({1, 1, -1}));
  EXPECT_LE(r.result.residual, r.result.allowance);
}

TEST(Independence, FourConstantsAt300Digits) {
  const auto r = independence_experiment({"1", "e", "S:1/2", "S:3/2"}, 300, Integer(10000));
  EXPECT_EQ(r.result.outcome, PslqResult::Outcome::Exclusion);
  for (const auto& c : r.constants) EXPECT_LT(c.N, 400u);
}

TEST(Independence, JsonAndDeterminism) {
  const auto a = independence_experiment({"1", "prime:0", "e"}, 60, Integer(1000), &table());
  const auto b = independence_experiment({"1", "prime:0", "e"}, 60, Integer(1000), &table());
  EXPECT_EQ(a.json(), b.json());
  const auto j = nlohmann::json::parse(a.json());
  EXPECT_EQ(j["outcome"], "relation");
  EXPECT_EQ(j["prec"], 60);
  EXPECT_EQ(j["coefficients"], nlohmann::json::array({"1", "1", "-1"}));
  EXPECT_TRUE(j.contains("residual"));
  ASSERT_EQ(j["constants"].size(), 3u);
  EXPECT_TRUE(j["constants"][1].contains("N"));
  EXPECT_TRUE(j["constants"][1].contains("rad"));

  const auto x = nlohmann::json::parse(
      independence_experiment({"1", "e", "S:3/2"}, 60, Integer(1000)).json());
  EXPECT_EQ(x["outcome"], "exclusion");
  EXPECT_GE(x["bound"].get<double>(), 1000);
}

TEST(Independence, BadSpecs) {
  EXPECT_THROW(evaluate_constant("zeta:3", 64), PreconditionError);
  EXPECT_THROW(evaluate_constant("S:0", 64), PreconditionError);
  EXPECT_THROW(independence_experiment({"1"}, 50, Integer(10)), PreconditionError);
}

TEST(Independence, LogConstants) {
  const auto r = independence_experiment({"log:2", "log:3", "log:6"}, 80, Integer(1000));
  ASSERT_EQ(r.result.outcome, PslqResult::Outcome::Relation);
  EXPECT_EQ(r.result.coefficients, ints({1, 1, -1}));
}
