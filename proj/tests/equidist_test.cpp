#include "irratlab/equidist.hpp"

#include <gtest/gtest.h>
#include <mpfr.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <json.hpp>

#include "irratlab/primes.hpp"

namespace irratlab::equidist {
namespace {

Rational R(long a, long b = 1) { return Rational(Integer(a), Integer(b)); }

Mod1Sequence seq(std::initializer_list<Rational> xs) { return Mod1Sequence(std::vector<Rational>(xs)); }

const primes::PrimeTable& table() {
  static const primes::PrimeTable t(100000);
  return t;
}

// sup_a |#{x < a}/N - a| over a in candidates, both one-sided limits.
Rational brute_star(const std::vector<Rational>& xs, const std::vector<Rational>& candidates) {
  const Rational N(static_cast<long>(xs.size()));
  Rational best(0);
  for (const auto& a : candidates) {
    long lt = 0, le = 0;
    for (const auto& x : xs) {
      lt += x < a;
      le += x <= a;
    }
    for (long c : {lt, le}) {
      const Rational d = (Rational(c) / N - a).abs();
      if (d > best) best = d;
    }
  }
  return best;
}

TEST(Mod1Sequence, RejectsOutOfRange) {
  EXPECT_THROW(seq({R(1)}), PreconditionError);
  EXPECT_THROW(seq({R(-1, 2)}), PreconditionError);
  EXPECT_EQ(Mod1Sequence::from_values({R(7, 2), R(-1, 3)}).entries(),
            (std::vector<Rational>{R(1, 2), R(2, 3)}));
}

TEST(FracParts, CustomLinear) {
  const auto s = frac_parts(CustomLinear{R(1, 2)}, 1, 4);
  EXPECT_EQ(s.entries(), (std::vector<Rational>{R(1, 2), R(0), R(1, 2), R(0)}));
  EXPECT_THROW(frac_parts(CustomLinear{R(1, 2)}, 4, 1), PreconditionError);
}

TEST(FracParts, PhaseHandValue) {
  const auto s = frac_parts(Thm1Phase{{Integer(1)}, {R(1, 2)}, 1}, 3, 3);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries()[0], R(1, 2));  // 4^(1/2)/4
}

TEST(FracParts, PhaseMatchesMpfrOracle) {
  const Thm1Phase ph{{Integer(1), Integer(-3)}, {R(1, 3), R(3, 2)}, 0};
  const auto s = frac_parts(ph, 50, 400);
  EXPECT_LT(s.max_radius(), Rational(Integer(1), Integer(1) << 39));
  mpfr_t acc, t, e;
  mpfr_inits2(300, acc, t, e, static_cast<mpfr_ptr>(nullptr));
  for (long n = 50; n <= 400; ++n) {
    mpfr_set_ui(acc, 0, MPFR_RNDN);
    double den = 1;
    for (long nu = 1; nu <= 2; ++nu) {
      den *= static_cast<double>(n + nu);
      for (std::size_t i = 0; i < 2; ++i) {
        mpfr_set_q(e, ph.lambdas[i].get().get_mpq_t(), MPFR_RNDN);
        mpfr_set_ui(t, static_cast<unsigned long>(n + nu), MPFR_RNDN);
        mpfr_pow(t, t, e, MPFR_RNDN);
        mpfr_mul_si(t, t, ph.a[i].get_si(), MPFR_RNDN);
        mpfr_div_d(t, t, den, MPFR_RNDN);
        mpfr_add(acc, acc, t, MPFR_RNDN);
      }
    }
    mpfr_floor(t, acc);
    mpfr_sub(acc, acc, t, MPFR_RNDN);
    const double want = mpfr_get_d(acc, MPFR_RNDN);
    EXPECT_NEAR(s.entries()[static_cast<std::size_t>(n - 50)].to_double(), want, 1e-11) << n;
  }
  mpfr_clears(acc, t, e, static_cast<mpfr_ptr>(nullptr));
}

TEST(FracParts, PolyOfPrimeRatio) {
  const auto s = frac_parts(PolyOfLi{IntPolynomial::parse("x"), false}, 1, 200, &table());
  for (std::uint64_t n = 1; n <= 200; ++n) {
    const Rational v(Integer(static_cast<unsigned long>(table().nth_prime(n))),
                     Integer(static_cast<unsigned long>(n)));
    ASSERT_EQ(s.entries()[n - 1], v.frac());
  }
  EXPECT_THROW(frac_parts(PolyOfLi{IntPolynomial::parse("3"), false}, 1, 2, &table()),
               PreconditionError);
  EXPECT_THROW(frac_parts(PolyOfLi{IntPolynomial::parse("x"), false}, 1, 2), PreconditionError);
  EXPECT_THROW(frac_parts(PolyOfLi{IntPolynomial::parse("x"), false}, 1, 20000, &table()),
               CapacityError);
}

TEST(FracParts, LiInverseMode) {
  const auto s = frac_parts(PolyOfLi{IntPolynomial::parse("x"), true}, 100, 140);
  for (long n = 100; n <= 140; ++n) {
    const double y = primes::li_inverse(static_cast<double>(n), 1e-10).value / static_cast<double>(n);
    EXPECT_NEAR(s.entries()[static_cast<std::size_t>(n - 100)].to_double(), y - std::floor(y), 1e-9);
  }
  EXPECT_GT(s.max_radius(), R(0));
  EXPECT_LT(s.max_radius(), R(1, 1000000));
}

TEST(StarDiscrepancy, Examples) {
  EXPECT_EQ(star_discrepancy(seq({R(1, 2)})), R(1, 2));
  EXPECT_EQ(star_discrepancy(seq({R(0), R(1, 3), R(2, 3)})), R(1, 3));
  EXPECT_EQ(star_discrepancy(seq({R(0), R(0), R(0)})), R(1));
  EXPECT_THROW(star_discrepancy(Mod1Sequence()), PreconditionError);
}

TEST(StarDiscrepancy, ExhaustiveSmallGridOracle) {
  // all multisets of size <= 4 over the 1/8 grid
  std::vector<Rational> grid;
  for (long k = 0; k < 8; ++k) grid.push_back(R(k, 8));
  std::vector<Rational> cands = grid;
  cands.push_back(R(1));
  std::vector<int> idx;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (!idx.empty()) {
      std::vector<Rational> xs;
      for (int i : idx) xs.push_back(grid[static_cast<std::size_t>(i)]);
      const Rational got = star_discrepancy(Mod1Sequence(xs));
      ASSERT_EQ(got, brute_star(xs, cands));
      ASSERT_GE(got, Rational(Integer(1), Integer(2 * static_cast<long>(xs.size()))));
      ASSERT_LE(got, R(1));
    }
    if (left == 0) return;
    for (int i = start; i < 8; ++i) {
      idx.push_back(i);
      rec(i, left - 1);
      idx.pop_back();
    }
  };
  rec(0, 4);
}

TEST(StarDiscrepancy, RandomRationalsMatchOracle) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> den(1, 50), len(1, 12);
  for (int t = 0; t < 300; ++t) {
    std::vector<Rational> xs;
    const long n = len(rng);
    for (long i = 0; i < n; ++i) {
      const long d = den(rng);
      xs.push_back(R(std::uniform_int_distribution<long>(0, d - 1)(rng), d));
    }
    std::vector<Rational> cands = xs;
    cands.push_back(R(1));
    ASSERT_EQ(star_discrepancy(Mod1Sequence(xs)), brute_star(xs, cands));
  }
}

TEST(ExpSum, Examples) {
  std::vector<Rational> roots;
  for (long n = 1; n <= 12; ++n) roots.push_back(R(n, 12).frac());
  EXPECT_NEAR(exp_sum(Mod1Sequence(roots), 1), 0.0, 1e-12);
  EXPECT_NEAR(exp_sum(seq({R(0), R(0), R(0), R(0), R(0), R(0), R(0)}), 3), 7.0, 1e-12);
  EXPECT_NEAR(exp_sum(seq({R(0), R(1, 2)}), 1), 0.0, 1e-12);
}

TEST(ExpSum, BoundedByNWithEqualityOnAlignedPhases) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(0, 996);
  for (int t = 0; t < 50; ++t) {
    std::vector<Rational> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(R(num(rng), 997));
    const Mod1Sequence s(xs);
    for (long h : {1L, 2L, 5L}) EXPECT_LE(exp_sum(s, h), 40.0);
    // h x_n all congruent mod 1: x_n = c + k_n / h
    std::vector<Rational> aligned;
    const Rational c = R(num(rng), 997 * 5);
    for (int i = 0; i < 40; ++i) aligned.push_back((c + R(i % 5, 5)).frac());
    EXPECT_NEAR(exp_sum(Mod1Sequence(aligned), 5), 40.0, 1e-9);
    EXPECT_LT(exp_sum(Mod1Sequence(aligned), 1), 40.0 - 1e-6);
  }
}

TEST(ExpSum, MatchesDirectComplexSum) {
  std::vector<Rational> xs;
  for (long n = 1; n <= 300; ++n) xs.push_back(R(n * n * 7 % 1009, 1009));
  const Mod1Sequence s(xs);
  for (long h = 1; h <= 5; ++h) {
    std::complex<long double> z = 0;
    for (long n = 1; n <= 300; ++n) {
      const long double ph = 2 * std::numbers::pi_v<long double> * static_cast<long double>(h * (n * n * 7 % 1009)) / 1009;
      z += std::polar(1.0L, ph);
    }
    EXPECT_NEAR(exp_sum(s, h), static_cast<double>(std::abs(z)), 1e-9);
  }
}

TEST(ErdosTuran, Examples) {
  EXPECT_NEAR(erdos_turan_rhs(seq({R(0), R(0), R(0), R(0), R(0), R(0), R(0)}), 1), 3.5, 1e-12);
  std::vector<Rational> xs;
  for (long n = 1; n <= 100; ++n) xs.push_back(R(n, 100).frac());
  const Mod1Sequence s(xs);
  EXPECT_NEAR(erdos_turan_rhs(s, 1), 0.5, 1e-12);
  EXPECT_GE(erdos_turan_rhs(s, 1), star_discrepancy(s).to_double());
  EXPECT_THROW(erdos_turan_rhs(s, 0), PreconditionError);
}

TEST(ErdosTuran, GoldenRatioSequence) {
  // phi ~ F_61 / F_60, far beyond the resolution N = 1000 needs
  Integer a = 1, b = 1;
  for (int i = 0; i < 59; ++i) {
    Integer c = a + b;
    a = b;
    b = c;
  }
  const Rational phi(b, a);
  EXPECT_NEAR(phi.to_double(), std::numbers::phi, 1e-15);
  const auto s = frac_parts(CustomLinear{phi}, 1, 1000);
  const double d = star_discrepancy(s).to_double();
  EXPECT_GE(erdos_turan_rhs(s, 31), d);
  EXPECT_LT(d, 0.01);
}

TEST(ErdosTuran, DominatesOnRandomSequences) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<long> len(1, 500), num(0, (1L << 30) - 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rational> xs;
    const long n = len(rng);
    for (long i = 0; i < n; ++i) xs.push_back(R(num(rng), 1L << 30));
    const Mod1Sequence s(xs);
    const double d = star_discrepancy(s).to_double();
    for (long H : {1L, 4L, 16L}) EXPECT_LE(d, erdos_turan_rhs(s, H));
  }
}

TEST(WeylVdc, Examples) {
  EXPECT_NEAR(weyl_vdc_rhs(100, 1e-4, 2, 0), 102.0, 1e-9);
  EXPECT_NEAR(weyl_vdc_rhs(1, 1, 1, 0), 2.0, 1e-12);
  // Q = 2: exponents 1/6, 1/4, 1 - 1/4 + 1/4
  EXPECT_NEAR(weyl_vdc_rhs(1, 64, 1, 1), 2.0 + 1.0 + std::pow(64.0, -0.25), 1e-12);
  EXPECT_NEAR(weyl_vdc_rhs(16, 1, 1, 1), 16.0 + 8.0 + 16.0, 1e-9);
  EXPECT_THROW(weyl_vdc_rhs(10, 0, 1, 0), PreconditionError);
  EXPECT_THROW(weyl_vdc_rhs(10, 1, 0.5, 0), PreconditionError);
}

TEST(WeylVdc, DominatesThreeHalvesPowerSums) {
  for (double theta : {0.01, 0.1}) {
    for (long N : {1000L, 10000L}) {
      std::complex<long double> z = 0;
      for (long n = 1; n <= N; ++n) {
        const long double f = theta * std::pow(static_cast<long double>(n), 1.5L);
        z += std::polar(1.0L, 2 * std::numbers::pi_v<long double> * (f - std::floor(f)));
      }
      // f'' = (3/4) theta t^{-1/2} on [1, N]
      const double lam = 0.75 * theta / std::sqrt(static_cast<double>(N));
      const double alpha = std::sqrt(static_cast<double>(N));
      EXPECT_LE(static_cast<double>(std::abs(z)), 50 * weyl_vdc_rhs(N, lam, alpha, 0));
    }
  }
}

TEST(SeriesPhase, SmallRangeIsNearlyUniform) {
  const auto s = frac_parts(Thm1Phase{{Integer(1)}, {R(3, 2)}, 2}, 1000, 20000);
  EXPECT_LE(star_discrepancy(s).to_double(), 0.05);
}

TEST(PnOverN, ReportFields) {
  const auto r = lemma6_experiment(IntPolynomial::parse("x"), 1000, 8, table());
  EXPECT_EQ(r.N, 1001);
  EXPECT_EQ(r.discrepancy_unnormalized, r.discrepancy_star * Rational(1001L));
  EXPECT_GT(r.lemma6_rhs, 0);
  EXPECT_NEAR(r.ratio, r.discrepancy_unnormalized.to_double() / r.lemma6_rhs, 1e-12);
  // the report's discrepancy is the exact one of p_n/n mod 1
  const auto s = frac_parts(PolyOfLi{IntPolynomial::parse("x"), false}, 1000, 2000, &table());
  EXPECT_EQ(r.discrepancy_star, star_discrepancy(s));
  const auto j = nlohmann::json::parse(r.json());
  for (const char* k : {"N", "discrepancy_star", "et_rhs", "lemma6_rhs", "ratio"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
}

TEST(PnOverN, RhsScalesWithCubeRootOfM) {
  // c large removes the x e^{-c sqrt(log x)} part
  const auto r1 = lemma6_experiment(IntPolynomial::parse("x"), 500, 1, table(), 1, 50);
  const auto r2 = lemma6_experiment(IntPolynomial::parse("2*x"), 500, 1, table(), 1, 50);
  EXPECT_NEAR(r2.lemma6_rhs / r1.lemma6_rhs, std::cbrt(2.0), 1e-9);
}

TEST(PnOverN, LiModeReportsSubstitutionGap) {
  const auto r = lemma6_experiment(IntPolynomial::parse("x"), 1000, 2, table(), 1, 1, true);
  EXPECT_TRUE(r.li_mode);
  EXPECT_GT(r.max_substitution_gap, 0);
  EXPECT_GT(r.li_discrepancy_star, 0);
  EXPECT_LE(r.li_discrepancy_star, 1);
  EXPECT_NE(r.json().find("max_substitution_gap"), std::string::npos);
}

}  // namespace
}  // namespace irratlab::equidist
