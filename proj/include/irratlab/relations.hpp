#pragma once

// Integer relations among certified reals (PSLQ), and the independence
// experiments for tuples like (1, e, S_lambda, ...) and (1, S_0, S_1, ...).

#include <cstdint>
#include <string>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::primes {
class PrimeTable;
}

namespace irratlab::relations {

/// Entries share a working precision `prec` (bits); every radius is at most 2^(8-prec).
class RealVector {
 public:
  RealVector(std::vector<CertifiedReal> entries, std::vector<std::string> labels, unsigned prec);
  /// Exact rationals.
  static RealVector exact(const std::vector<Rational>& values, unsigned prec = 128);

  const std::vector<CertifiedReal>& entries() const { return x_; }
  const std::vector<std::string>& labels() const { return labels_; }
  unsigned prec() const { return prec_; }
  std::size_t size() const { return x_.size(); }
  bool all_exact() const;

 private:
  std::vector<CertifiedReal> x_;
  std::vector<std::string> labels_;
  unsigned prec_;
};

struct PslqResult {
  enum class Outcome { Relation, Exclusion };
  Outcome outcome = Outcome::Exclusion;
  std::vector<Integer> coefficients;  // relation: primitive, first nonzero entry positive
  double bound = 0;                   // every relation has Euclidean norm >= bound
  Rational residual;                  // |sum a_i mid_i|
  Rational allowance;                 // sum |a_i| rad_i + 2^(-prec/2)
  bool exact = false;                 // exact entries and zero residual
  bool partial = false;               // iteration cap hit
  std::string warning;
  std::uint64_t iterations = 0;
};

/// Bits needed before pslq accepts `max_norm` for an n-vector.
unsigned required_bits(std::size_t n, const Integer& max_norm);

/// PSLQ at the vector's precision. PreconditionError when prec is below
/// required_bits; PrecisionError if a candidate fails the residual check.
PslqResult pslq(const RealVector& v, const Integer& max_norm, std::uint64_t iter_cap = 100000);

/// Constant specs: an integer or rational ("1", "3/7"), "e", "S:<lambda>"
/// (sum [n^lambda]/n!), "prime:<k>" (sum p_n^k/n!, n >= 1), "prime:<poly in x>",
/// "log:<rational>".
struct ConstantValue {
  std::string label;
  CertifiedReal value;
  std::uint64_t N = 0;  // truncation index; 0 for closed forms
};

ConstantValue evaluate_constant(const std::string& spec, unsigned bits,
                                const primes::PrimeTable* table = nullptr);

struct IndependenceReport {
  std::vector<ConstantValue> constants;
  unsigned prec_digits = 0;
  unsigned prec_bits = 0;
  Integer max_norm;
  PslqResult result;

  std::string json() const;
};

/// Evaluates each spec to the target precision (in parallel), then runs pslq.
/// Prime series build their own sieve when `table` is null.
IndependenceReport independence_experiment(const std::vector<std::string>& specs,
                                           unsigned digits, const Integer& max_norm,
                                           const primes::PrimeTable* table = nullptr,
                                           std::uint64_t iter_cap = 100000);

unsigned digits_to_bits(unsigned digits);

}  // namespace irratlab::relations
