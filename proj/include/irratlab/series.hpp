#pragma once

// Exact partial sums of S_lambda = sum_{n>=0} [n^lambda]/n! and of
// sum_nu P(p_nu)/nu!, with rational tail bounds, plus the structural
// witnesses around the map lambda -> S_lambda.

#include <cstdint>
#include <optional>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::primes {
class PrimeTable;
}

namespace irratlab::series {

struct PartialSum {
  Rational value;
  Rational tail_bound;  // |S - value| <= tail_bound
  std::uint64_t N = 0;

  /// Ball [value - tail, value + tail] at `prec` bits.
  CertifiedReal enclosure(unsigned prec) const;
};

/// sum_{n=0}^{N} [n^lambda]/n!, [0^lambda] = 0. lambda = 0 is rejected (0^0).
/// The tail bound comes from tail_bound(lambda, N), or from the smallest
/// admissible N' > N when N itself is too small (value stays at N).
PartialSum s_lambda_partial(const Rational& lambda, std::uint64_t N);

/// Smallest N >= 1 with 2^q (N+1)^p <= N^(p+q), lambda = p/q: from there on
/// successive terms n^(lambda+1)/n! at least halve.
std::uint64_t min_tail_index(const Rational& lambda);

/// B >= sum_{n>N} n^(lambda+1)/n!, B = 2 ceil((N+1)^(lambda+1)) / (N+1)!.
/// PreconditionError naming min_tail_index when N is too small.
Rational tail_bound(const Rational& lambda, std::uint64_t N);

/// sum_{nu=1}^{N} P(p_nu)/nu!. The tail uses p_nu <= 2 nu^2 and
/// |P(x)| <= (sum |c_i|) x^deg for x >= 1. CapacityError if the table lacks p_N.
PartialSum prime_series_partial(const IntPolynomial& P, std::uint64_t N,
                                const primes::PrimeTable& table);

/// Checks p_nu <= 2 nu log nu for 3 <= nu <= upto against the sieve.
bool chebyshev_bound_holds(const primes::PrimeTable& table, std::uint64_t upto);

/// sum_{n=0}^{N} 1/n!, tail 2/(N+1)!.
PartialSum e_partial(std::uint64_t N);

/// Certified values with tail below 2^-bits.
CertifiedReal s_lambda_value(const Rational& lambda, unsigned bits);
CertifiedReal prime_series_value(const IntPolynomial& P, unsigned bits,
                                 const primes::PrimeTable& table);
CertifiedReal e_value(unsigned bits);
/// Index N that the functions above use for the given bit target.
std::uint64_t s_lambda_index_for(const Rational& lambda, unsigned bits);
std::uint64_t prime_series_index_for(const IntPolynomial& P, unsigned bits);
std::uint64_t e_index_for(unsigned bits);

/// Minimal n0 >= 1 with n0^lambda2 > n0^lambda1 + 1, 0 <= lambda1 < lambda2.
std::uint64_t injectivity_witness(const Rational& lambda1, const Rational& lambda2);
/// The defining inequality at n, decided with certified arithmetic.
bool witness_inequality(std::uint64_t n, const Rational& lambda1, const Rational& lambda2);

/// sum_{n=2}^{N} #{m : n^t <= m <= n^(t+1)}; asserts the result is <= N^(t+2).
Integer cover_count(const Rational& t, std::uint64_t N);

struct ResidualNorm {
  unsigned M = 0;  // [lambda_k] + 1
  CertifiedReal value;  // ||sum_{nu=1}^{M} ...||, truncated sum only
  // Majorant of the discarded nu > M part; nullopt when n + 1 < 2^([lambda_k]+2).
  std::optional<Rational> tail;
};

/// ||sum_{nu=1}^{M} (a_1 (n+nu)^l_1 + ... + a_k (n+nu)^l_k) / ((n+1)...(n+nu))||.
ResidualNorm residual_norm(const std::vector<Integer>& a, const std::vector<Rational>& lambdas,
                           std::uint64_t n, unsigned prec = 128);

}  // namespace irratlab::series
