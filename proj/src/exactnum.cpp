#include "irratlab/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace irratlab {

std::string to_string(const Integer& z) { return z.get_str(); }

namespace {

// Decimal only; mpz's base-0 parsing would read "0125" as octal.
Integer parse_integer(std::string s) {
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  Integer z;
  if (s.empty() || z.set_str(s, 10) != 0) throw std::invalid_argument(s);
  return z;
}

// Three significant digits, rounded up.
std::string render_radius(const Rational& r) {
  if (r.is_zero()) return "0";
  int exp10 = 0;
  Rational scaled = r;
  while (scaled >= Rational(1000)) { scaled /= Rational(10); ++exp10; }
  while (scaled < Rational(100)) { scaled *= Rational(10); --exp10; }
  std::string m = scaled.ceil().get_str();
  if (m.size() == 4) { m = "100"; ++exp10; }
  std::ostringstream os;
  os << m[0] << '.' << m.substr(1) << 'e' << (exp10 + 2);
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw PreconditionError("rational with zero denominator");
  q_.get_num() = num;
  q_.get_den() = den;
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw PreconditionError("empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      return Rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const auto frac_len = static_cast<unsigned long>(s.size() - dot - 1);
      return Rational(parse_integer(digits), ipow(10, frac_len));
    }
    return Rational(parse_integer(s));
  } catch (const std::invalid_argument&) {
    throw PreconditionError("malformed rational literal '" + std::string(text) + "'");
  }
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite double has no rational value");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  q_ /= o.q_;
  return *this;
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

std::string Rational::str() const { return num().get_str() + "/" + den().get_str(); }

// ---------------------------------------------------------------- integers

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

RootResult floor_root(const Integer& x, unsigned long q) {
  if (sgn(x) < 0) throw PreconditionError("root of a negative integer");
  if (q == 0) throw PreconditionError("zeroth root");
  RootResult r;
  r.exact = mpz_root(r.root.get_mpz_t(), x.get_mpz_t(), q) != 0;
  return r;
}

std::pair<unsigned long, unsigned long> exponent_parts(const Rational& lambda) {
  if (lambda.sign() < 0) throw PreconditionError("exponent must be nonnegative, got " + lambda.str());
  const Integer p = lambda.num();
  const Integer q = lambda.den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) {
    throw PreconditionError("exponent " + lambda.str() + " has an oversized numerator or denominator");
  }
  return {p.get_ui(), q.get_ui()};
}

Integer certified_floor(const Integer& n, const Rational& lambda) {
  const auto [p, q] = exponent_parts(lambda);
  if (sgn(n) < 0) throw PreconditionError("certified_floor needs n >= 0");
  if (sgn(n) == 0) {
    if (p == 0) throw PreconditionError("0^0 is undefined");
    return 0;
  }
  const Integer np = ipow(n, p);
  Integer m = floor_root(np, q).root;
  // The root is exact in integers; the bracket is the defining property.
  if (!(ipow(m, q) <= np && np < ipow(m + 1, q))) {
    throw std::logic_error("integer root bracket violated");
  }
  return m;
}

Integer certified_ceil(const Integer& n, const Rational& lambda) {
  const auto [p, q] = exponent_parts(lambda);
  if (sgn(n) == 0) {
    if (p == 0) throw PreconditionError("0^0 is undefined");
    return 0;
  }
  const auto r = floor_root(ipow(n, p), q);
  return r.exact ? r.root : r.root + 1;
}

// ---------------------------------------------------------------- CertifiedReal

namespace {

Integer shift_left(const Integer& x, unsigned k) {
  Integer r;
  mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

Integer pow2(unsigned k) { return shift_left(Integer(1), k); }

// floor(x / 2^k) and whether it was exact.
std::pair<Integer, bool> shift_right_floor(const Integer& x, unsigned k) {
  Integer q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), k);
  const bool exact = mpz_divisible_2exp_p(x.get_mpz_t(), k) != 0;
  return {q, exact};
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::pair<Integer, bool> floor_div(const Integer& a, const Integer& b) {
  Integer q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {q, sgn(r) == 0};
}

// Brings both operands to the larger precision; shifting up is exact.
std::pair<CertifiedReal, CertifiedReal> align(const CertifiedReal& a, const CertifiedReal& b) {
  if (a.prec() == b.prec()) return {a, b};
  return a.prec() > b.prec() ? std::pair{a, b.with_prec(a.prec())}
                             : std::pair{a.with_prec(b.prec()), b};
}

}  // namespace

CertifiedReal::CertifiedReal(Integer mid_units, Integer rad_units, unsigned prec)
    : mid_(std::move(mid_units)), rad_(std::move(rad_units)), prec_(prec) {
  if (sgn(rad_) < 0) throw PreconditionError("negative ball radius");
}

CertifiedReal CertifiedReal::exact_integer(const Integer& n, unsigned prec) {
  return CertifiedReal(shift_left(n, prec), 0, prec);
}

CertifiedReal CertifiedReal::from_rational(const Rational& x, unsigned prec) {
  auto [q, exact] = floor_div(shift_left(x.num(), prec), x.den());
  return CertifiedReal(q, exact ? 0 : 1, prec);
}

CertifiedReal CertifiedReal::from_ball(const Rational& center, const Rational& radius,
                                       unsigned prec) {
  if (radius.sign() < 0) throw PreconditionError("negative ball radius");
  auto [q, exact] = floor_div(shift_left(center.num(), prec), center.den());
  const Rational scaled = radius * Rational(pow2(prec));
  return CertifiedReal(q, scaled.ceil() + (exact ? 0 : 1), prec);
}

Rational CertifiedReal::mid() const { return Rational(mid_, pow2(prec_)); }
Rational CertifiedReal::rad() const { return Rational(rad_, pow2(prec_)); }
Rational CertifiedReal::lower() const { return Rational(mid_ - rad_, pow2(prec_)); }
Rational CertifiedReal::upper() const { return Rational(mid_ + rad_, pow2(prec_)); }

bool CertifiedReal::contains(const Rational& x) const { return lower() <= x && x <= upper(); }

bool CertifiedReal::contains_zero() const { return abs(mid_) <= rad_; }

bool CertifiedReal::straddles_multiple_of(const Rational& step) const {
  // Some integer k with lower <= k*step <= upper.
  const Rational lo = lower() / step;
  const Rational hi = upper() / step;
  return lo.ceil() <= hi.floor();
}

CertifiedReal CertifiedReal::with_prec(unsigned prec) const {
  if (prec >= prec_) {
    return CertifiedReal(shift_left(mid_, prec - prec_), shift_left(rad_, prec - prec_), prec);
  }
  const unsigned k = prec_ - prec;
  auto [m, exact] = shift_right_floor(mid_, k);
  Integer r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), rad_.get_mpz_t(), k);
  return CertifiedReal(m, r + (exact ? 0 : 1), prec);
}

CertifiedReal operator+(const CertifiedReal& x, const CertifiedReal& y) {
  auto [a, b] = align(x, y);
  return CertifiedReal(a.mid_ + b.mid_, a.rad_ + b.rad_, a.prec_);
}

CertifiedReal operator-(const CertifiedReal& x, const CertifiedReal& y) {
  auto [a, b] = align(x, y);
  return CertifiedReal(a.mid_ - b.mid_, a.rad_ + b.rad_, a.prec_);
}

CertifiedReal operator*(const CertifiedReal& x, const CertifiedReal& y) {
  auto [a, b] = align(x, y);
  const unsigned p = a.prec_;
  const Integer prod = a.mid_ * b.mid_;
  const Integer err = abs(a.mid_) * b.rad_ + abs(b.mid_) * a.rad_ + a.rad_ * b.rad_;
  auto [m, exact] = shift_right_floor(prod, p);
  Integer r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), err.get_mpz_t(), p);
  return CertifiedReal(m, r + (exact ? 0 : 1), p);
}

CertifiedReal operator/(const CertifiedReal& x, const CertifiedReal& y) {
  auto [a, b] = align(x, y);
  if (b.contains_zero()) throw PreconditionError("division by a ball containing zero");
  const unsigned p = a.prec_;
  const Integer am = abs(a.mid_);
  const Integer bm = abs(b.mid_);
  auto [m, exact] = floor_div(shift_left(a.mid_, p), b.mid_);
  // |x/y - a/b| <= (ra |b| + |a| rb) / (|b| (|b| - rb)), scaled by 2^p.
  const Integer num = shift_left(a.rad_ * bm + am * b.rad_, p);
  const Integer den = bm * (bm - b.rad_);
  return CertifiedReal(m, ceil_div(num, den) + (exact ? 0 : 1), p);
}

CertifiedReal operator*(const CertifiedReal& a, const Integer& k) {
  return CertifiedReal(a.mid_ * k, a.rad_ * abs(k), a.prec_);
}

CertifiedReal operator/(const CertifiedReal& a, const Integer& d) {
  if (sgn(d) == 0) throw PreconditionError("division by zero");
  auto [m, exact] = floor_div(a.mid_, d);
  return CertifiedReal(m, ceil_div(a.rad_, abs(d)) + (exact ? 0 : 1), a.prec_);
}

std::string CertifiedReal::mid_decimal(int digits) const { return to_decimal(mid(), digits); }

std::string CertifiedReal::rad_decimal() const { return render_radius(rad()); }

std::string CertifiedReal::str(int digits) const {
  // Truncating the midpoint to `digits` decimals moves it by < 10^-digits.
  const Rational slack(Integer(1), ipow(10, static_cast<unsigned long>(digits)));
  return to_decimal(mid(), digits) + " ± " + render_radius(rad() + slack);
}

CertifiedReal pow_rational(const Integer& n, const Rational& lambda, unsigned prec) {
  const auto [p, q] = exponent_parts(lambda);
  if (sgn(n) < 0) throw PreconditionError("pow_rational needs n >= 0");
  if (sgn(n) == 0) {
    if (p == 0) throw PreconditionError("0^0 is undefined");
    return CertifiedReal(0, 0, prec);
  }
  const Integer np = ipow(n, p);
  const auto whole = floor_root(np, q);
  if (whole.exact) return CertifiedReal::exact_integer(whole.root, prec);
  // floor(n^lambda * 2^prec) = floor((n^p * 2^(prec q))^(1/q)); true value in [m, m+1).
  const auto scaled = floor_root(shift_left(np, prec * static_cast<unsigned>(q)), q);
  return CertifiedReal(scaled.root, 1, prec);
}

Rational nearest_int_dist(const Rational& x) {
  const Rational f = x.frac();
  return f <= Rational(1, 2) ? f : Rational(1) - f;
}

CertifiedReal nearest_int_dist(const CertifiedReal& x) {
  const unsigned p = x.prec();
  const Integer one = pow2(p);
  if (4 * x.rad_units() >= one) {
    throw PrecisionError("precision insufficient: radius >= 1/4 before folding");
  }
  // Nearest integer to the midpoint, then fold; ||.|| is 1-Lipschitz.
  Integer k;
  mpz_fdiv_q(k.get_mpz_t(), Integer(2 * x.mid_units() + one).get_mpz_t(),
             Integer(2 * one).get_mpz_t());
  const Integer d = abs(x.mid_units() - k * one);
  Integer lo = d - x.rad_units();
  Integer hi = d + x.rad_units();
  if (sgn(lo) < 0) lo = 0;
  const Integer half = one / 2;
  if (hi > half) hi = half;
  Integer m;
  mpz_fdiv_q_2exp(m.get_mpz_t(), Integer(lo + hi).get_mpz_t(), 1);
  return CertifiedReal(m, hi - m, p);
}

CertifiedReal log_rational(const Rational& x, unsigned prec) {
  if (x.sign() <= 0) throw PreconditionError("logarithm of a nonpositive number");
  const unsigned work = prec + 32;
  // atanh series: log y = 2 sum z^(2k+1)/(2k+1), z = (y-1)/(y+1), |z| <= 1/3 here.
  auto log_near_one = [work](const Rational& y) {
    const Rational z = (y - Rational(1)) / (y + Rational(1));
    const CertifiedReal zc = CertifiedReal::from_rational(z, work);
    const CertifiedReal z2 = zc * zc;
    CertifiedReal power = zc;
    CertifiedReal sum(0, 0, work);
    const Rational zabs = z.abs();
    Rational zpow = zabs;
    const Rational eps(Integer(1), pow2(work));
    for (unsigned long k = 0;; ++k) {
      sum = sum + power / Integer(2 * k + 1);
      power = power * z2;
      zpow *= zabs * zabs;
      // remaining tail <= |z|^(2k+3) / ((2k+3)(1 - z^2))
      const Rational tail = zpow / (Rational(Integer(2 * k + 3)) * (Rational(1) - zabs * zabs));
      if (tail < eps) {
        return (sum + CertifiedReal::from_ball(0, tail, work)) * Integer(2);
      }
    }
  };
  // x = 2^e * y with y in [2/3, 4/3].
  long e = 0;
  Rational y = x;
  while (y > Rational(4, 3)) { y /= Rational(2); ++e; }
  while (y < Rational(2, 3)) { y *= Rational(2); --e; }
  CertifiedReal result = log_near_one(y);
  if (e != 0) result = result + log_near_one(Rational(2)) * Integer(e);
  return result.with_prec(prec);
}

std::string to_decimal(const Rational& x, int digits, bool round_up) {
  const Integer scale = ipow(10, static_cast<unsigned long>(std::max(digits, 0)));
  const Rational scaled = x.abs() * Rational(scale);
  const Integer units = round_up ? scaled.ceil() : scaled.floor();
  std::string s = units.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (x.sign() < 0) s.insert(0, "-");
  return s;
}

// ---------------------------------------------------------------- IntPolynomial

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::monomial(unsigned degree, const Integer& c) {
  std::vector<Integer> v(degree + 1, Integer(0));
  v[degree] = c;
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw PreconditionError("empty polynomial");
  const auto bad = [&]() { return PreconditionError("malformed polynomial '" + std::string(text) + "'"); };
  std::vector<Integer> coeffs;
  if (s.find('x') == std::string::npos && s.find('X') == std::string::npos &&
      s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        coeffs.push_back(parse_integer(item));
      } catch (const std::invalid_argument&) {
        throw bad();
      }
    }
    return IntPolynomial(std::move(coeffs));
  }
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw bad();
    }
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    Integer c = j > i ? parse_integer(s.substr(i, j - i)) : Integer(1);
    const bool had_digits = j > i;
    i = j;
    if (i < s.size() && s[i] == '*') {
      if (!had_digits) throw bad();
      ++i;
    }
    unsigned deg = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      deg = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        size_t k = i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) throw bad();
        deg = static_cast<unsigned>(std::stoul(s.substr(i, k - i)));
        i = k;
      }
    } else if (!had_digits) {
      throw bad();
    }
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, Integer(0));
    coeffs[deg] += sign * c;
  }
  return IntPolynomial(std::move(coeffs));
}

Integer IntPolynomial::max_abs_coeff() const {
  Integer m = 0;
  for (const auto& c : c_) m = std::max(m, Integer(abs(c)));
  return m;
}

Integer IntPolynomial::abs_coeff_sum() const {
  Integer s = 0;
  for (const auto& c : c_) s += abs(c);
  return s;
}

Integer IntPolynomial::operator()(const Integer& x) const {
  Integer acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational IntPolynomial::operator()(const Rational& x) const {
  // Horner over a common denominator: sum_i c_i num^i den^(d-i) / den^d.
  if (c_.empty()) return Rational(0);
  const Integer num = x.num();
  const Integer den = x.den();
  Integer acc = 0;
  Integer den_pow = 1;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * num + *it * den_pow;
    den_pow *= den;
  }
  return Rational(acc, ipow(den, c_.size() - 1));
}

double IntPolynomial::operator()(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

std::string IntPolynomial::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int d = degree(); d >= 0; --d) {
    const Integer& c = c_[d];
    if (sgn(c) == 0) continue;
    const Integer a = abs(c);
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? "-" : "+";
    }
    if (d == 0 || a != 1) out += a.get_str();
    if (d >= 1) {
      if (a != 1) out += "*";
      out += "x";
      if (d >= 2) out += "^" + std::to_string(d);
    }
  }
  return out;
}

}  // namespace irratlab
