#pragma once

// Exact integers and rationals (backed by GMP), a binary fixed-point
// midpoint-radius ball type, and exactly decided floors of rational powers.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "irratlab/error.hpp"

namespace irratlab {

using Integer = mpz_class;

/// Default cap for precision escalation, in bits.
inline constexpr unsigned kMaxPrecisionBits = 1u << 20;

std::string to_string(const Integer& z);

/// Exact rational in canonical form: den >= 1, gcd(|num|, den) = 1.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : q_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(const Integer& n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  // Integer expression templates (a * b, -a, ...).
  template <class U>
  Rational(const __gmp_expr<mpz_t, U>& e) : q_(Integer(e)) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "a/b", "a" or a plain decimal such as "-0.125".
  static Rational parse(std::string_view text);
  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double x);

  Integer num() const { return q_.get_num(); }
  Integer den() const { return q_.get_den(); }
  const mpq_class& get() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  Integer floor() const;
  Integer ceil() const;
  /// x - floor(x), always in [0, 1).
  Rational frac() const;
  Rational abs() const { return Rational(::abs(q_)); }
  double to_double() const { return q_.get_d(); }

  /// "num/den", denominator always printed.
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

/// Exact n!.
Integer factorial(unsigned long n);

/// Exact b^e.
Integer ipow(const Integer& b, unsigned long e);

struct RootResult {
  Integer root;  // floor(x^(1/q))
  bool exact = false;
};

/// floor(x^(1/q)) for x >= 0, with a flag for perfect powers.
RootResult floor_root(const Integer& x, unsigned long q);

/// Checks lambda = p/q >= 0 with p, q fitting in unsigned long; returns (p, q).
std::pair<unsigned long, unsigned long> exponent_parts(const Rational& lambda);

/// [n^lambda] decided in integers: returns m with m^q <= n^p < (m+1)^q.
/// [0^lambda] = 0 for lambda > 0; 0^0 is rejected.
Integer certified_floor(const Integer& n, const Rational& lambda);
/// Smallest integer >= n^lambda.
Integer certified_ceil(const Integer& n, const Rational& lambda);

/// Midpoint-radius ball in binary fixed point. The represented set is
/// [(mid - rad) * 2^-prec, (mid + rad) * 2^-prec] and every operation returns a
/// ball containing the exact result of the operation on any members.
class CertifiedReal {
 public:
  CertifiedReal() = default;
  CertifiedReal(Integer mid_units, Integer rad_units, unsigned prec);

  static CertifiedReal exact_integer(const Integer& n, unsigned prec);
  /// Encloses x with radius at most one unit in the last place.
  static CertifiedReal from_rational(const Rational& x, unsigned prec);
  /// Encloses the whole interval [center - radius, center + radius].
  static CertifiedReal from_ball(const Rational& center, const Rational& radius, unsigned prec);

  const Integer& mid_units() const { return mid_; }
  const Integer& rad_units() const { return rad_; }
  unsigned prec() const { return prec_; }

  Rational mid() const;
  Rational rad() const;
  Rational lower() const;
  Rational upper() const;
  bool is_exact() const { return sgn(rad_) == 0; }
  bool contains(const Rational& x) const;
  bool contains_zero() const;
  /// True iff the closed interval contains an integer multiple of `step`.
  bool straddles_multiple_of(const Rational& step) const;

  /// Rescales to another precision (rounding widens by one unit when lossy).
  CertifiedReal with_prec(unsigned prec) const;

  double to_double() const { return mid().to_double(); }

  /// "mid ± rad" with `digits` decimals in the midpoint; the printed radius
  /// also covers the decimal rounding of the midpoint.
  std::string str(int digits = 30) const;
  std::string mid_decimal(int digits) const;
  std::string rad_decimal() const;

  CertifiedReal operator-() const { return CertifiedReal(-mid_, rad_, prec_); }
  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
  /// Throws PreconditionError when b contains zero.
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator*(const CertifiedReal& a, const Integer& k);
  /// Division by a nonzero exact integer.
  friend CertifiedReal operator/(const CertifiedReal& a, const Integer& d);

 private:
  Integer mid_;
  Integer rad_;
  unsigned prec_ = 64;
};

/// Certified enclosure of n^lambda, lambda = p/q. Exact (radius 0, is_exact())
/// when n^p is a perfect q-th power; otherwise the radius is one unit, which is
/// <= 2^(1-prec) n^lambda for n >= 1.
CertifiedReal pow_rational(const Integer& n, const Rational& lambda, unsigned prec);

/// Distance to the nearest integer, in [0, 1/2].
Rational nearest_int_dist(const Rational& x);
/// Certified enclosure of ||x||. Requires rad < 1/4 (PrecisionError otherwise).
CertifiedReal nearest_int_dist(const CertifiedReal& x);

/// Certified natural logarithm of a positive rational.
CertifiedReal log_rational(const Rational& x, unsigned prec);

/// Decimal rendering of x truncated toward zero (or rounded away, when `round_up`).
std::string to_decimal(const Rational& x, int digits, bool round_up = false);

/// Runs `attempt(prec)` for prec = start, 2*start, ... up to `cap`; the first
/// engaged optional wins. Throws PrecisionError past the cap.
template <class Attempt>
auto escalate_precision(unsigned start, unsigned cap, Attempt&& attempt, const char* what)
    -> typename std::invoke_result_t<Attempt, unsigned>::value_type {
  for (unsigned prec = start; prec <= cap; prec *= 2) {
    if (auto r = attempt(prec)) return *std::move(r);
    if (prec > cap / 2) break;
  }
  throw PrecisionError(std::string("precision insufficient: ") + what + " undecided at " +
                       std::to_string(cap) + " bits");
}

/// Integer-coefficient univariate polynomial, coefficients in ascending order.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coeffs);

  /// Accepts "x^2-3*x+1", "2x", "7" or an ascending list "1,-3,1".
  static IntPolynomial parse(std::string_view text);
  static IntPolynomial monomial(unsigned degree, const Integer& c = 1);

  const std::vector<Integer>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Integer max_abs_coeff() const;
  Integer abs_coeff_sum() const;

  Integer operator()(const Integer& x) const;
  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  std::string str() const;
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<Integer> c_;
};

}  // namespace irratlab
