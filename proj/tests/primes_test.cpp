#include "irratlab/primes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "irratlab/polyelim.hpp"

namespace irratlab::primes {
namespace {

bool trial_division(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const PrimeTable& table() {
  static const PrimeTable t(3'000'000);
  return t;
}

TEST(PrimeTable, AgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n <= 10000; ++n) ASSERT_EQ(table().is_prime(n), trial_division(n)) << n;
}

TEST(PrimeTable, SmallSegmentsGiveSameBits) {
  const PrimeTable a(100000, 1000), b(100000, 1 << 20), c(100000, 63);
  EXPECT_TRUE(std::equal(a.words().begin(), a.words().end(), b.words().begin()));
  EXPECT_TRUE(std::equal(a.words().begin(), a.words().end(), c.words().begin()));
  EXPECT_EQ(a.count(), 9592u);
}

TEST(PrimeTable, NthPrime) {
  EXPECT_EQ(table().nth_prime(1), 2u);
  EXPECT_EQ(table().nth_prime(5), 11u);
  const std::uint64_t p = table().nth_prime(100000);
  // independent recount below p
  std::uint64_t below = 0;
  for (std::uint64_t k = 2; k < p; ++k) below += trial_division(k);
  EXPECT_TRUE(trial_division(p));
  EXPECT_EQ(below, 99999u);
  EXPECT_THROW(table().nth_prime(0), PreconditionError);
  EXPECT_THROW(PrimeTable(100).nth_prime(26), CapacityError);
}

TEST(PrimeTable, IndexProperties) {
  const auto ps = table().primes();
  for (std::size_t i = 1; i < ps.size(); ++i) ASSERT_LT(ps[i - 1], ps[i]);
  for (std::uint64_t n = 1; n <= 5000; ++n) ASSERT_EQ(table().pi(table().nth_prime(n)), n);
}

TEST(PrimeTable, CapacityMessageNamesLimit) {
  try {
    PrimeTable(100).nth_prime(1000);
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(limit_for_index(1000))), std::string::npos);
  }
  EXPECT_GE(limit_for_index(1000), 7919u);
  for (std::uint64_t n : {1u, 2u, 6u, 100u, 10000u, 100000u}) {
    EXPECT_GE(limit_for_index(n), table().nth_prime(n));
  }
}

TEST(PrimeTable, CacheRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("irsv_test_" + std::to_string(::getpid()) + ".bin");
  std::filesystem::remove(path);
  const PrimeTable built = PrimeTable::cached(path, 50000);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto loaded = PrimeTable::load(path, 50000);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(loaded->count(), built.count());
  EXPECT_EQ(loaded->nth_prime(5133), 49999u);
  EXPECT_FALSE(PrimeTable::load(path, 60000).has_value());
  const PrimeTable rebuilt = PrimeTable::cached(path, 60000);
  EXPECT_EQ(rebuilt.limit(), 60000u);
  EXPECT_TRUE(PrimeTable::load(path, 60000).has_value());
  // a larger cache serves smaller requests and is left alone
  EXPECT_EQ(PrimeTable::cached(path, 1000).limit(), 60000u);
  EXPECT_FALSE(PrimeTable::load_at_least(path, 70000).has_value());
  std::filesystem::remove(path);
  EXPECT_FALSE(PrimeTable::load(path, 60000).has_value());
}

TEST(Gaps, Examples) {
  EXPECT_EQ(gaps(table(), 1, 4).gaps, (std::vector<std::uint64_t>{1, 2, 2, 4}));
  EXPECT_EQ(gaps(table(), 4, 1).gaps, (std::vector<std::uint64_t>{4}));
  EXPECT_TRUE(gaps(table(), 9, 0).gaps.empty());
  EXPECT_THROW(gaps(PrimeTable(20), 1, 10), CapacityError);
}

TEST(Gaps, PositiveAndEvenAfterFirst) {
  const auto g = gaps(table(), 1, 100000);
  EXPECT_EQ(g.gaps[0], 1u);
  for (std::size_t i = 1; i < g.gaps.size(); ++i) {
    ASSERT_GT(g.gaps[i], 0u);
    ASSERT_EQ(g.gaps[i] % 2, 0u);
  }
}

TEST(Nu, Examples) {
  EXPECT_EQ(nu(3, OffsetTuple({0, 2})), 2u);
  EXPECT_EQ(nu(2, OffsetTuple({0, 2})), 1u);
  EXPECT_EQ(nu(5, OffsetTuple({0})), 1u);
  EXPECT_EQ(nu(3, OffsetTuple({2})), 2u);
  EXPECT_THROW(nu(4, OffsetTuple({0})), PreconditionError);
  EXPECT_THROW(OffsetTuple({2, 2}), PreconditionError);
  EXPECT_THROW(OffsetTuple({}), PreconditionError);
}

TEST(Constellation, Examples) {
  EXPECT_EQ(constellation_count(table(), 10, OffsetTuple({0, 2})), 2u);
  EXPECT_EQ(constellation_count(table(), 10, OffsetTuple({0, 1})), 0u);
  EXPECT_EQ(constellation_count(table(), 2, OffsetTuple({0})), 2u);
  EXPECT_THROW(constellation_count(PrimeTable(30), 10, OffsetTuple({0, 12})), CapacityError);
}

TEST(Constellation, SingleOffsetIsPrimeCount) {
  for (std::uint64_t x : {100u, 1000u, 10000u}) {
    EXPECT_EQ(constellation_count(table(), x, OffsetTuple({0})),
              table().pi(2 * x) - table().pi(x - 1));
  }
}

TEST(Selberg, Formula) {
  const double x = 1e6, L = std::log(x), LL = std::log(L);
  EXPECT_NEAR(selberg_rhs(x, 1, 1.0), x * LL * LL * LL / (L * L), 1e-6);
  const double y = 100, Ly = std::log(y), LLy = std::log(Ly);
  EXPECT_NEAR(selberg_rhs(y, 0, 2.0), 2 * y * LLy * LLy / Ly, 1e-9);
  const double ee = std::exp(std::exp(1.0)) * 2;
  EXPECT_GT(selberg_rhs(ee, 1, 1.0), 0);
  EXPECT_THROW(selberg_rhs(10, 1, 1.0), PreconditionError);
}

TEST(GapPoly, Examples) {
  using polyelim::MultiPoly;
  EXPECT_EQ(gap_poly_nonvanish_rate(table(), MultiPoly::parse("X1"), 1, 1000), Rational(1));
  EXPECT_EQ(gap_poly_nonvanish_rate(table(), MultiPoly::parse("X1 - X2"), 2, 2),
            Rational(Integer(1), Integer(2)));
  EXPECT_EQ(gap_poly_nonvanish_rate(table(), MultiPoly::parse("X1 - 2"), 2, 3),
            Rational(Integer(1), Integer(3)));
  EXPECT_EQ(gap_poly_nonvanish_rate(table(), MultiPoly::parse("1/2*X1 - 1"), 2, 3),
            Rational(Integer(1), Integer(3)));
  EXPECT_THROW(gap_poly_nonvanish_rate(table(), MultiPoly(), 2, 3), PreconditionError);
}

TEST(GapPoly, RateGrowsTowardOne) {
  const auto F = polyelim::MultiPoly::parse("X1 - X2");
  double prev = 0;
  for (std::uint64_t start : {1000u, 10000u, 100000u}) {
    const auto r = gap_poly_nonvanish_rate(table(), F, start, start).to_double();
    EXPECT_GT(r, prev * 0.98) << start;
    EXPECT_GT(r, 0.7);
    prev = r;
  }
}

TEST(GapPoly, CapSplitsWindows) {
  const auto F = polyelim::MultiPoly::parse("X1*X2 - 4");
  const auto rep = gap_poly_experiment(table(), F, 10000, 5000);
  EXPECT_EQ(rep.total, 5000u);
  EXPECT_EQ(rep.kept + rep.discarded, rep.total);
  EXPECT_LE(rep.kept_nonzero, rep.nonzero);
  const double x = 15000;
  EXPECT_NEAR(rep.gap_cap, std::log(x) * std::log(std::log(x)), 1e-9);
}

TEST(Li, KnownValues) {
  // li(x) - li(2) with li(10) = 6.1655995047872979, li(2) = 1.0451637801174928
  EXPECT_NEAR(li(10), 6.1655995047872979 - 1.0451637801174928, 1e-9);
  // li(10^6) = 78627.549159462181919
  EXPECT_NEAR(li(1e6), 78627.549159462182 - 1.0451637801174928, 1e-6);
  EXPECT_DOUBLE_EQ(li(2), 0.0);
  EXPECT_THROW(li(1.5), PreconditionError);
}

TEST(LiInverse, RoundTrip) {
  const auto r = li_inverse(li(10, 1e-13), 1e-10);
  EXPECT_NEAR(r.value, 10.0, 1e-8);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_THROW(li_inverse(1.0), PreconditionError);
}

TEST(LiInverse, PrimeNumberTheoremRatio) {
  for (double t : {1e3, 1e4, 1e5}) {
    const double y = li_inverse(t).value;
    EXPECT_NEAR(y / (t * std::log(t)), 1.0, 0.2) << t;
  }
}

TEST(LiInverse, MonotoneAndResidualWithinTol) {
  double prev = 0;
  for (double t = 2; t < 5000; t *= 1.37) {
    const auto r = li_inverse(t, 1e-9);
    EXPECT_GT(r.value, prev);
    EXPECT_LE(r.residual, 1e-9);
    prev = r.value;
  }
}

TEST(LiInverse, RunMatchesPointwise) {
  const auto run = li_inverse_run(1000, 4000, 1e-8);
  ASSERT_EQ(run.size(), 3001u);
  for (std::size_t i = 0; i < run.size(); ++i) {
    ASSERT_LE(run[i].residual, 1e-8);
    if (i % 500 == 0) {
      EXPECT_NEAR(run[i].value, li_inverse(1000.0 + static_cast<double>(i)).value, 1e-6);
    }
    if (i) ASSERT_GT(run[i].value, run[i - 1].value);
  }
}

}  // namespace
}  // namespace irratlab::primes
