#include "irratlab/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "irratlab/primes.hpp"

namespace irratlab::series {

namespace {

Integer to_int(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

Rational pow2_neg(unsigned bits) { return Rational(Integer(1), ipow(2, bits)); }

// 2^q (N+1)^p <= N^(p+q)
bool tail_admissible(unsigned long p, unsigned long q, std::uint64_t N) {
  if (N == 0) return false;
  return ipow(2, q) * ipow(to_int(N + 1), p) <= ipow(to_int(N), p + q);
}

// Exact sum of [n^lambda]/n! for n in (from, to].
Rational s_lambda_range(const Rational& lambda, std::uint64_t from, std::uint64_t to) {
  // Horner-style: numerator over to! accumulated in integers.
  Integer num = 0, fact = factorial(from);
  Integer den = fact;
  for (std::uint64_t n = from + 1; n <= to; ++n) {
    num *= to_int(n);
    den *= to_int(n);
    num += certified_floor(to_int(n), lambda);
  }
  return Rational(num, den);
}

// The prime tail terms A (2 nu^2)^d / nu! halve from nu = N+1 on.
bool prime_tail_admissible(int d, std::uint64_t N) {
  const auto e = static_cast<unsigned long>(2 * d);
  return 2 * ipow(to_int(N + 2), e) <= to_int(N + 2) * ipow(to_int(N + 1), e);
}

Rational prime_tail(const IntPolynomial& P, std::uint64_t N) {
  const int d = std::max(P.degree(), 0);
  const Integer term = P.abs_coeff_sum() * ipow(2, static_cast<unsigned long>(d)) *
                       ipow(to_int(N + 1), static_cast<unsigned long>(2 * d));
  return Rational(2 * term, factorial(N + 1));
}

std::uint64_t min_prime_tail_index(const IntPolynomial& P) {
  const int d = std::max(P.degree(), 0);
  std::uint64_t N = 1;
  while (!prime_tail_admissible(d, N)) ++N;
  return N;
}

}  // namespace

CertifiedReal PartialSum::enclosure(unsigned prec) const {
  return CertifiedReal::from_ball(value, tail_bound, prec);
}

std::uint64_t min_tail_index(const Rational& lambda) {
  const auto [p, q] = exponent_parts(lambda);
  // The halving condition is monotone in N; gallop then bisect.
  std::uint64_t hi = 1;
  while (!tail_admissible(p, q, hi)) hi *= 2;
  std::uint64_t lo = hi / 2;  // inadmissible (or 0)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (tail_admissible(p, q, mid) ? hi : lo) = mid;
  }
  return hi;
}

Rational tail_bound(const Rational& lambda, std::uint64_t N) {
  const auto [p, q] = exponent_parts(lambda);
  if (!tail_admissible(p, q, N)) {
    throw PreconditionError("tail_bound: N = " + std::to_string(N) +
                            " too small for geometric domination; minimal admissible N is " +
                            std::to_string(min_tail_index(lambda)));
  }
  const Integer top = certified_ceil(to_int(N + 1), lambda + Rational(1));
  return Rational(2 * top, factorial(N + 1));
}

PartialSum s_lambda_partial(const Rational& lambda, std::uint64_t N) {
  if (lambda.sign() <= 0) throw PreconditionError("S_lambda needs lambda > 0 (0^0 is excluded)");
  if (N < 1) throw PreconditionError("S_lambda partial sum needs N >= 1");
  PartialSum s;
  s.N = N;
  s.value = s_lambda_range(lambda, 0, N);
  const std::uint64_t n_min = min_tail_index(lambda);
  if (N >= n_min) {
    s.tail_bound = tail_bound(lambda, N);
  } else {
    s.tail_bound = s_lambda_range(lambda, N, n_min) + tail_bound(lambda, n_min);
  }
  return s;
}

PartialSum prime_series_partial(const IntPolynomial& P, std::uint64_t N,
                                const primes::PrimeTable& table) {
  if (P.is_zero()) throw PreconditionError("prime series needs P not identically zero");
  if (N < 1) throw PreconditionError("prime series needs N >= 1");
  if (table.count() < N) {
    throw CapacityError("prime series needs p_1..p_" + std::to_string(N) + " (" +
                        std::to_string(N) + " primes); table has " +
                        std::to_string(table.count()));
  }
  const auto ps = table.primes();
  const std::uint64_t n_min = std::max(N, min_prime_tail_index(P));
  Integer num = 0, den = 1;
  PartialSum s;
  s.N = N;
  for (std::uint64_t nu = 1; nu <= n_min; ++nu) {
    num *= to_int(nu);
    den *= to_int(nu);
    if (nu <= N) {
      num += P(to_int(ps[nu - 1]));
    } else {
      // beyond N only magnitudes matter: |P(p_nu)| <= A (2 nu^2)^d
      const int d = std::max(P.degree(), 0);
      num += P.abs_coeff_sum() * ipow(2 * to_int(nu) * to_int(nu), static_cast<unsigned long>(d));
    }
    if (nu == N) s.value = Rational(num, den);
  }
  const Rational beyond = Rational(num, den) - s.value;
  s.tail_bound = (n_min > N ? beyond : Rational(0)) + prime_tail(P, n_min);
  return s;
}

bool chebyshev_bound_holds(const primes::PrimeTable& table, std::uint64_t upto) {
  if (table.count() < upto) {
    throw CapacityError("Chebyshev check needs " + std::to_string(upto) + " primes");
  }
  const auto ps = table.primes();
  for (std::uint64_t nu = 3; nu <= upto; ++nu) {
    const double v = static_cast<double>(nu);
    if (static_cast<double>(ps[nu - 1]) > 2 * v * std::log(v)) return false;
  }
  return true;
}

PartialSum e_partial(std::uint64_t N) {
  if (N < 1) throw PreconditionError("e partial sum needs N >= 1");
  Integer num = 0, den = 1;
  for (std::uint64_t n = 0; n <= N; ++n) {
    if (n > 0) {
      num *= to_int(n);
      den *= to_int(n);
    }
    num += 1;
  }
  return PartialSum{Rational(num, den), Rational(Integer(2), factorial(N + 1)), N};
}

std::uint64_t s_lambda_index_for(const Rational& lambda, unsigned bits) {
  const Rational target = pow2_neg(bits);
  std::uint64_t N = min_tail_index(lambda);
  while (tail_bound(lambda, N) > target) ++N;
  return N;
}

std::uint64_t prime_series_index_for(const IntPolynomial& P, unsigned bits) {
  const Rational target = pow2_neg(bits);
  std::uint64_t N = min_prime_tail_index(P);
  while (prime_tail(P, N) > target) ++N;
  return N;
}

CertifiedReal s_lambda_value(const Rational& lambda, unsigned bits) {
  return s_lambda_partial(lambda, s_lambda_index_for(lambda, bits)).enclosure(bits + 8);
}

CertifiedReal prime_series_value(const IntPolynomial& P, unsigned bits,
                                 const primes::PrimeTable& table) {
  return prime_series_partial(P, prime_series_index_for(P, bits), table).enclosure(bits + 8);
}

std::uint64_t e_index_for(unsigned bits) {
  std::uint64_t N = 1;
  const Rational target = pow2_neg(bits);
  while (Rational(Integer(2), factorial(N + 1)) > target) ++N;
  return N;
}

CertifiedReal e_value(unsigned bits) { return e_partial(e_index_for(bits)).enclosure(bits + 8); }

bool witness_inequality(std::uint64_t n, const Rational& lambda1, const Rational& lambda2) {
  if (n == 0) throw PreconditionError("witness inequality needs n >= 1");
  const Integer N = to_int(n);
  const unsigned scale = static_cast<unsigned>(mpz_sizeinbase(N.get_mpz_t(), 2)) *
                         static_cast<unsigned>(lambda2.ceil().get_ui() + 1);
  auto attempt = [&](unsigned prec) -> std::optional<bool> {
    const CertifiedReal d = pow_rational(N, lambda2, prec) - pow_rational(N, lambda1, prec) -
                            CertifiedReal::exact_integer(1, prec);
    if (d.is_exact()) return d.mid().sign() > 0;
    if (d.lower().sign() > 0) return true;
    if (d.upper().sign() <= 0) return false;
    return std::nullopt;
  };
  return escalate_precision(64 + scale, kMaxPrecisionBits, attempt, "injectivity comparison");
}

std::uint64_t injectivity_witness(const Rational& lambda1, const Rational& lambda2) {
  if (lambda1.sign() < 0 || !(lambda1 < lambda2)) {
    throw PreconditionError("injectivity witness needs 0 <= lambda1 < lambda2");
  }
  // n^l2 - n^l1 is increasing for n >= 1, so the inequality is monotone.
  std::uint64_t hi = 1;
  while (!witness_inequality(hi, lambda1, lambda2)) {
    if (hi > (std::uint64_t{1} << 62)) throw std::overflow_error("injectivity witness too large");
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // fails (or 0)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (witness_inequality(mid, lambda1, lambda2) ? hi : lo) = mid;
  }
  return hi;
}

Integer cover_count(const Rational& t, std::uint64_t N) {
  if (t.sign() < 0) throw PreconditionError("cover count needs t >= 0");
  if (N < 2) throw PreconditionError("cover count needs N >= 2");
  Integer count = 0;
  const Rational t1 = t + Rational(1);
  for (std::uint64_t n = 2; n <= N; ++n) {
    count += certified_floor(to_int(n), t1) - certified_ceil(to_int(n), t) + 1;
  }
  // count <= N^(t+2)  <=>  count^q <= N^(p + 2q)
  const auto [p, q] = exponent_parts(t);
  if (ipow(count, q) > ipow(to_int(N), p + 2 * q)) {
    throw std::logic_error("cover count exceeds N^(t+2)");
  }
  return count;
}

ResidualNorm residual_norm(const std::vector<Integer>& a, const std::vector<Rational>& lambdas,
                           std::uint64_t n, unsigned prec) {
  if (a.empty() || a.size() != lambdas.size()) {
    throw PreconditionError("residual_norm needs matching nonempty coefficient/exponent lists");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i].sign() < 0) throw PreconditionError("residual_norm needs lambda_i >= 0");
    if (i && !(lambdas[i - 1] < lambdas[i])) {
      throw PreconditionError("residual_norm needs lambda_1 < ... < lambda_k");
    }
  }
  const Rational& top = lambdas.back();
  ResidualNorm out;
  out.M = static_cast<unsigned>(top.floor().get_ui()) + 1;
  if (n <= out.M) throw PreconditionError("residual_norm needs n > M");

  auto attempt = [&](unsigned p) -> std::optional<CertifiedReal> {
    CertifiedReal sum = CertifiedReal::exact_integer(0, p);
    Integer denom = 1;
    for (unsigned nu = 1; nu <= out.M; ++nu) {
      const Integer m = to_int(n + nu);
      denom *= m;
      CertifiedReal term = CertifiedReal::exact_integer(0, p);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        term = term + pow_rational(m, lambdas[i], p) * a[i];
      }
      sum = sum + term / denom;
    }
    if (!sum.is_exact() && sum.straddles_multiple_of(Rational(Integer(1), Integer(2)))) {
      return std::nullopt;
    }
    return nearest_int_dist(sum);
  };
  out.value = escalate_precision(prec, kMaxPrecisionBits, attempt, "residual norm fold");

  // nu > M: |term| <= A nu^L (n+1)^(L - nu), ratio <= 2^L/(n+1) <= 1/2.
  Integer A = 0;
  for (const auto& c : a) A += abs(c);
  const Integer L = top.ceil();
  if (to_int(n + 1) >= ipow(2, L.get_ui() + 1)) {
    const Rational lead = Rational(2 * A * certified_ceil(Integer(out.M + 1), top));
    const Integer below = certified_floor(to_int(n + 1), Rational(Integer(out.M + 1)) - top);
    out.tail = lead / Rational(below);
  }
  return out;
}

}  // namespace irratlab::series
