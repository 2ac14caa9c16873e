#pragma once

// Sequences mod 1: exact star discrepancy, exponential sums, the
// Erdos-Turan and Weyl-van der Corput right-hand sides, and the two
// experiments built from them.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::primes {
class PrimeTable;
}

namespace irratlab::equidist {

/// Values in [0, 1). Entries are exact rationals; when they stand for real
/// numbers known only up to a ball, `max_radius` bounds the error.
class Mod1Sequence {
 public:
  Mod1Sequence() = default;
  explicit Mod1Sequence(std::vector<Rational> entries, Rational max_radius = Rational(0));
  /// Folds arbitrary rationals into [0, 1).
  static Mod1Sequence from_values(const std::vector<Rational>& values);

  const std::vector<Rational>& entries() const { return x_; }
  std::size_t size() const { return x_.size(); }
  const Rational& max_radius() const { return radius_; }

 private:
  std::vector<Rational> x_;
  Rational radius_;
};

/// f(t) = sum_{nu=1}^{M} (a_1 (t+nu)^l_1 + ... + a_k (t+nu)^l_k) / ((t+1)...(t+nu)).
struct Thm1Phase {
  std::vector<Integer> a;
  std::vector<Rational> lambdas;  // strictly increasing, >= 0
  unsigned M = 0;                 // 0: [lambda_k] + 1
};

/// Q(p_n / n), or Q(li^{-1}(n) / n) when `use_li_inverse`.
struct PolyOfLi {
  IntPolynomial Q;
  bool use_li_inverse = false;
};

/// n * alpha.
struct CustomLinear {
  Rational alpha;
};

using PhaseSpec = std::variant<Thm1Phase, PolyOfLi, CustomLinear>;

/// Fractional parts for n = n1..n2. Certified entries are folded only after
/// their enclosure is narrower than 2^-40 and clear of integers.
Mod1Sequence frac_parts(const PhaseSpec& spec, std::int64_t n1, std::int64_t n2,
                        const primes::PrimeTable* table = nullptr);

/// Exact D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N).
Rational star_discrepancy(const Mod1Sequence& seq);

/// |sum_n e(h x_n)|, phases reduced mod 1 exactly before going to double.
double exp_sum(const Mod1Sequence& seq, std::int64_t h);
/// Rounding error allowance for exp_sum: N 2^-45.
double exp_sum_error(std::size_t N);

/// 1/(H+1) + (3/N) sum_{h=1}^{H} exp_sum(seq, h) / h.
double erdos_turan_rhs(const Mod1Sequence& seq, std::int64_t H);

/// q = 0: alpha N lambda^(1/2) + lambda^(-1/2); q >= 1 with Q = 2^q:
/// N (alpha^2 lambda)^(1/(4Q-2)) + N^(1-1/(2Q)) alpha^(1/(2Q)) + N^(1-1/(2Q)+1/Q^2) lambda^(-1/(2Q)).
double weyl_vdc_rhs(double N, double lambda, double alpha, int q);

struct Lemma6Report {
  std::int64_t x = 0;
  std::int64_t N = 0;                  // x + 1 terms, n = x..2x
  Rational discrepancy_star;           // normalized D*_N
  Rational discrepancy_unnormalized;   // N D*_N
  double et_rhs = 0;                   // normalized Erdos-Turan bound at H
  std::int64_t H = 0;
  double lemma6_rhs = 0;               // C (x e^{-c sqrt(log x)} + M^{1/3} x^{2/3} log^{d/3} x)
  double ratio = 0;                    // N D*_N / lemma6_rhs
  double C = 1, c = 1;
  // Same sequence with p_n replaced by li^{-1}(n); only when requested.
  bool li_mode = false;
  double li_discrepancy_star = 0;
  double max_substitution_gap = 0;     // max_n |Q(p_n/n) - Q(li^{-1}(n)/n)|

  std::string json() const;
};

Lemma6Report lemma6_experiment(const IntPolynomial& Q, std::int64_t x, std::int64_t H,
                               const primes::PrimeTable& table, double C = 1, double c = 1,
                               bool li_mode = false);

/// C x^{2/3} (log x)^{1/3} for the trend runs.
double lemma6_envelope(double x, double C);

}  // namespace irratlab::equidist
