#pragma once

// Digit concatenations alpha = 0.f(1)f(2)f(3)... in base b, bounded-window
// period detection with rational reconstruction, and diagnostics for the
// ratio f(n+1)/f(n).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irratlab/exactnum.hpp"

namespace irratlab::digits {

/// ell(n) = floor(log_b n) + 1 for n >= 1, by comparison with powers of b.
std::uint64_t digit_count(const Integer& n, unsigned base);

/// Base-b digits of n >= 0, most significant first.
std::vector<std::uint8_t> to_digits(const Integer& n, unsigned base);

/// True when b = m^k for some k >= 2.
bool is_proper_power(unsigned base);

/// An integer sequence f(1), f(2), ... from a small grammar:
///   n | repunit | repunit:B | pow:A | poly:<polynomial in x> |
///   linrec:c1,..,ck;f1,..,fk[;d]   (f(n) = c1 f(n-1) + ... + ck f(n-k) + d) |
///   table:v1,v2,...
class Sequence {
 public:
  static Sequence parse(std::string_view spec, unsigned base = 10);
  static Sequence table(std::vector<Integer> values);

  /// f(n), n >= 1. CapacityError past the end of a table.
  Integer operator()(std::uint64_t n) const;
  const std::string& spec() const { return spec_; }

 private:
  enum class Kind { Identity, Repunit, Power, Poly, LinRec, Table };
  Kind kind_ = Kind::Identity;
  std::string spec_;
  Integer a_;  // repunit base or power base
  IntPolynomial poly_;
  std::vector<Integer> coeffs_, init_;
  Integer shift_;
  mutable std::vector<Integer> memo_;  // linrec values f(1), f(2), ...
  std::vector<Integer> table_;
};

class DigitStream {
 public:
  DigitStream(Sequence f, unsigned base);

  /// Materializes whole blocks until at least `L` digits exist.
  void extend_to(std::uint64_t L);

  unsigned base() const { return base_; }
  const Sequence& sequence() const { return f_; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }
  /// block_starts()[n-1] = 1-based position of the first digit of f(n).
  const std::vector<std::uint64_t>& block_starts() const { return starts_; }
  std::uint64_t blocks() const { return starts_.size(); }
  /// Block n containing 1-based digit position `pos`.
  std::uint64_t block_of(std::uint64_t pos) const;
  std::string str(bool blocks = false) const;

 private:
  Sequence f_;
  unsigned base_;
  std::vector<std::uint8_t> digits_;
  std::vector<std::uint64_t> starts_;
};

DigitStream build_stream(Sequence f, unsigned base, std::uint64_t L);

/// First L base-b digits after the point of x in [0, 1).
std::vector<std::uint8_t> expand_rational(const Rational& x, unsigned base, std::uint64_t L);

struct PeriodReport {
  bool found = false;
  std::uint64_t s = 0;  // preperiod
  std::uint64_t p = 0;  // period
  Rational reconstructed;
  std::uint64_t verified_digits = 0;

  std::string json() const;
};

/// Lexicographically minimal (s, p), s <= S, 1 <= p <= Pmax, consistent with
/// every digit given. Needs at least S + 3 Pmax digits (CapacityError otherwise).
PeriodReport detect_period(const std::vector<std::uint8_t>& digits, unsigned base,
                           std::uint64_t S, std::uint64_t Pmax);
PeriodReport detect_period(const DigitStream& stream, std::uint64_t S, std::uint64_t Pmax);

struct Theorem2Report {
  unsigned base = 10;
  bool base_proper_power = false;
  std::uint64_t n1 = 0, n2 = 0;
  std::vector<double> ratios;  // f(n+1)/f(n), n = n1..n2
  double limit_estimate = 0;   // mean over the last quartile
  double last_quartile_max_dev = 0;
  Integer nearest_power;       // b^k closest to the estimate
  std::uint64_t nearest_exponent = 0;
  double relative_gap = 0;     // |estimate - b^k| / b^k
  bool is_power_of_base = false;
  Integer c;                   // candidate used below
  Integer max_deviation;       // max_n |f(n+1) - c f(n)|
  Integer max_deviation_early; // same, first three quartiles
  Integer max_deviation_late;  // same, last quartile
  bool bounded_evidence = false;  // late <= early

  std::string json() const;
};

Theorem2Report check_theorem2_conclusion(const Sequence& f, unsigned base, std::uint64_t n1,
                                         std::uint64_t n2,
                                         std::optional<Integer> c_candidate = std::nullopt);

}  // namespace irratlab::digits
