#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::polyelim {
class MultiPoly;
}

namespace irratlab::primes {

/// Primality bit store for [0, limit] produced by a segmented sieve, with the
/// list of primes as an index for p_n and pi(x) queries. Immutable once built.
class PrimeTable {
 public:
  static constexpr std::size_t kDefaultSegment = std::size_t{1} << 20;

  explicit PrimeTable(std::uint64_t limit, std::size_t segment_size = kDefaultSegment);

  /// Flat cache file: "IRSV", u32 version, u64 limit, u64 word count, then
  /// little-endian u64 words (bit j of word w is the primality of 64w + j).
  void save(const std::filesystem::path& path) const;
  /// nullopt if the file is missing, malformed, or built for another limit.
  static std::optional<PrimeTable> load(const std::filesystem::path& path, std::uint64_t limit);
  /// Any cached table with limit >= `limit`.
  static std::optional<PrimeTable> load_at_least(const std::filesystem::path& path,
                                                 std::uint64_t limit);
  /// Loads a cache that is large enough, or sieves and replaces the file
  /// (exclusive-create temp file, then rename).
  static PrimeTable cached(const std::filesystem::path& path, std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::size_t count() const { return primes_.size(); }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const std::uint64_t> words() const { return bits_; }

  bool is_prime(std::uint64_t n) const;
  /// p_n, 1-based. CapacityError names the limit needed.
  std::uint64_t nth_prime(std::uint64_t n) const;
  /// pi(x) for x <= limit.
  std::uint64_t pi(std::uint64_t x) const;

 private:
  PrimeTable() = default;
  void index();

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> primes_;
};

/// A sieve limit that certainly contains p_n (Rosser-type upper bound).
std::uint64_t limit_for_index(std::uint64_t n);

struct GapSequence {
  std::uint64_t start = 1;  // index n of the first gap delta_n
  std::vector<std::uint64_t> gaps;
};

/// (delta_n, ..., delta_{n+count-1}), delta_n = p_{n+1} - p_n.
GapSequence gaps(const PrimeTable& table, std::uint64_t n, std::uint64_t count);

/// 0 <= a_1 < ... < a_k.
class OffsetTuple {
 public:
  explicit OffsetTuple(std::vector<std::uint64_t> offsets);
  const std::vector<std::uint64_t>& values() const { return a_; }
  std::uint64_t max() const { return a_.back(); }
  std::size_t size() const { return a_.size(); }

 private:
  std::vector<std::uint64_t> a_;
};

/// Number of distinct residues mod p among {0, a_1, ..., a_k}.
std::uint64_t nu(std::uint64_t p, const OffsetTuple& offsets);

/// #{n in [x, 2x] : n + a_i prime for all i}.
std::uint64_t constellation_count(const PrimeTable& table, std::uint64_t x,
                                  const OffsetTuple& offsets);

/// C x (log log x)^(k+2) / (log x)^(k+1), x >= 16.
double selberg_rhs(double x, int k, double C);

/// Fraction of n in [n_start, n_start + n_count) with F(delta_n, ..., delta_{n+m-1}) != 0,
/// m = F.window().
Rational gap_poly_nonvanish_rate(const PrimeTable& table, const polyelim::MultiPoly& F,
                                 std::uint64_t n_start, std::uint64_t n_count);

struct GapPolyReport {
  std::uint64_t total = 0;
  std::uint64_t nonzero = 0;
  Rational rate;
  // Same count restricted to windows whose gaps are all <= log x log log x
  // (x = n_start + n_count).
  double gap_cap = 0;
  std::uint64_t kept = 0;
  std::uint64_t kept_nonzero = 0;
  std::uint64_t discarded = 0;
};

GapPolyReport gap_poly_experiment(const PrimeTable& table, const polyelim::MultiPoly& F,
                                  std::uint64_t n_start, std::uint64_t n_count);

/// li(x) = integral_2^x dt / log t by adaptive Simpson; `err` receives the
/// estimated quadrature error when given.
double li(double x, double tol = 1e-10, double* err = nullptr);
/// integral_a^b dt / log t.
double li_between(double a, double b, double tol = 1e-10, double* err = nullptr);

struct LiInverse {
  double value = 0;
  double residual = 0;  // |li(value) - t| including quadrature error
  int iterations = 0;
};

/// The unique y >= 2 with li(y) = t, via Newton (li' = 1/log). ConvergenceError
/// past `max_iter`.
LiInverse li_inverse(double t, double tol = 1e-8, int max_iter = 100);

/// li_inverse(t) for t = first, first+1, ..., last, reusing the previous root
/// as the integration anchor.
std::vector<LiInverse> li_inverse_run(std::int64_t first, std::int64_t last, double tol = 1e-8);

}  // namespace irratlab::primes
