#pragma once

// Sparse multivariate polynomials over Q in gap variables X_1, X_2, ...
// (X_i stands for delta_{n+i-1}) and the pair-elimination engine that turns
// sum_nu P(p_{n+nu}) / ((n+1)...(n+nu)) into a relation
// sum_i Q_i(delta_n, ...) p_n^i / n^i = R(n).

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::primes {
class PrimeTable;
}

namespace irratlab::polyelim {

/// Exponent vector, trailing zeros trimmed so equal monomials compare equal
/// regardless of the window they were built in.
using Exponents = std::vector<unsigned>;

class MultiPoly {
 public:
  MultiPoly() = default;
  static MultiPoly constant(const Rational& c);
  /// c * X_index^power, index >= 1.
  static MultiPoly variable(unsigned index, unsigned power = 1, const Rational& c = Rational(1));
  /// Parses e.g. "X1^2*X2 - 3*X3 + 1/2".
  static MultiPoly parse(std::string_view text);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Largest variable index occurring (0 for constants).
  unsigned window() const;
  /// -1 for the zero polynomial.
  int total_degree() const;
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponents& e) const;
  bool has_integer_coefficients() const;
  /// Least common multiple of the coefficient denominators.
  Integer denominator_lcm() const;

  /// X_i -> X_{i+by}.
  MultiPoly shifted(unsigned by = 1) const;

  /// Variables beyond point.size() are treated as 0.
  Rational evaluate(std::span<const Rational> point) const;
  Integer evaluate_integer(std::span<const std::uint64_t> point) const;  // integer coefficients only
  /// Evaluation over F_p; nullopt if a coefficient denominator vanishes mod p.
  std::optional<std::uint64_t> evaluate_mod(std::span<const std::uint64_t> point,
                                            std::uint64_t p) const;

  std::string str() const;
  /// Short stable hex digest of the canonical form.
  std::string digest() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  void add_term(Exponents e, const Rational& c);

 private:
  std::map<Exponents, Rational> terms_;
};

/// A monomial p_n^nu / n^mu.
struct Pair {
  int nu = 0;
  int mu = 0;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// (nu1, mu1) > (nu2, mu2) iff nu1 - mu1 > nu2 - mu2, or equal differences and nu1 > nu2.
bool succeeds(const Pair& a, const Pair& b);

/// F(n) = sum P_{nu mu}(delta_n, ...) p_n^nu / n^mu + R(n), where every
/// monomial with nu - mu below `threshold` has been folded into R(n).
class PairTable {
 public:
  explicit PairTable(int threshold = 0) : threshold_(threshold) {}

  const std::map<Pair, MultiPoly>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int threshold() const { return threshold_; }
  /// Largest gap variable index used by any coefficient.
  unsigned window() const;
  /// Worst-case power c in the R(n) << log^c n / n budget accumulated so far.
  int log_power() const { return log_power_; }
  void raise_log_power(int c) { log_power_ = std::max(log_power_, c); }

  /// Adds c * p_n^nu / n^mu; negligible pairs only update the log budget.
  void add(const Pair& pair, const MultiPoly& c);
  const MultiPoly* find(const Pair& pair) const;

  /// Maximal pair under `succeeds`. Throws PreconditionError when empty.
  Pair max_pair() const;
  /// Every stored pair has nu == mu.
  bool reduced() const;

  /// Exact value of the table part at index n, given p_n and the gaps
  /// delta_n, delta_{n+1}, ... (at least window() of them).
  Rational evaluate(std::int64_t n, std::int64_t p_n, std::span<const std::uint64_t> gaps) const;

 private:
  std::map<Pair, MultiPoly> entries_;
  int threshold_;
  int log_power_ = 0;
};

/// Table for F^(0)(n) = sum_{nu=1}^{depth} P(p_{n+nu}) / ((n+1)...(n+nu)) with
/// p_{n+nu} = p_n + delta_n + ... + delta_{n+nu-1}, 1/((n+1)...(n+nu)) expanded
/// in powers of 1/n. An empty table means every term is negligible (deg P = 0).
PairTable initial_table(const IntPolynomial& P, unsigned depth, int threshold = 0);

struct StepRecord {
  Pair eliminated;
  MultiPoly pivot;  // P_{nu0 mu0} of the table being reduced
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  int max_diff_before = 0;
  std::vector<Pair> created;  // pairs absent before the step
  std::map<Pair, std::string> digests;
};

/// F'(n) = P0(delta_{n+1}, ...) F(n) - P0(delta_n, ...) F(n+1) with P0 the
/// coefficient of the maximal pair. Throws PreconditionError("table already
/// reduced") when the maximal pair has nu0 = 0 or sits at the threshold.
PairTable eliminate_step(const PairTable& table, StepRecord* record = nullptr);

/// The closed form of the new (nu0 - 1, mu0) coefficient:
/// -nu0 P0 shift(P0) X_1 + shift(P0) B - P0 shift(B), B = P_{nu0-1, mu0}.
MultiPoly predicted_subleading(const PairTable& table);

struct Relation {
  /// q[i-1] = Q_i, the coefficient of p_n^i / n^i, integer coefficients.
  std::vector<MultiPoly> q;
  Integer scale;  // common denominator that was cleared
  unsigned window = 0;
};

struct EliminationRun {
  IntPolynomial input;
  unsigned depth = 0;
  PairTable initial;
  std::vector<PairTable> tables;  // tables[0] = initial, tables[i] = F^(i)
  std::vector<StepRecord> steps;
  Relation relation;
};

/// Iterates eliminate_step until all pairs satisfy nu = mu, then clears
/// denominators. Throws std::runtime_error with the trace if everything
/// cancels, PreconditionError for constant P.
EliminationRun run_elimination(const IntPolynomial& P, unsigned depth,
                               std::size_t max_steps = 10000);

/// JSON trace: ordered steps with eliminated pair, table sizes and digests.
std::string trace_json(const EliminationRun& run);

struct ConsistencyPoint {
  std::int64_t n = 0;
  std::size_t stage = 0;
  Rational table_value;
  Rational recursion_value;
  double abs_diff = 0;
  double budget = 0;
  int log_power = 0;
  bool ok = false;
};

/// Evaluates F^(i)(n) both from the table and from the defining recursion on
/// actual primes, and compares against C log^c n / n.
std::vector<ConsistencyPoint> semantic_consistency(const EliminationRun& run,
                                                   const primes::PrimeTable& table,
                                                   std::span<const std::int64_t> ns,
                                                   double budget_constant);

/// nu X_1 P(X_1..X_m) + P(X_1..X_m) Q(X_2..X_{m+1}) - P(X_2..X_{m+1}) Q(X_1..X_m).
MultiPoly lemma5_combination(const MultiPoly& P, const MultiPoly& Q, long nu);

struct Lemma5Verdict {
  bool vanishes = false;          // canonical-form verdict (authoritative)
  bool random_says_zero = false;  // all random evaluations were zero
  std::optional<std::vector<std::uint64_t>> witness;  // point in F_p with nonzero value
  MultiPoly combination;
  bool agree() const { return vanishes == random_says_zero; }
};

inline constexpr std::uint64_t kIdentityTestPrime = 4611686018427387847ULL;  // 2^62 - 57

Lemma5Verdict lemma5_test(const MultiPoly& P, const MultiPoly& Q, long nu, std::uint64_t seed,
                          int trials = 8);

}  // namespace irratlab::polyelim
