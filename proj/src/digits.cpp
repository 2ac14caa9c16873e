#include "irratlab/digits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace irratlab::digits {

namespace {

void check_base(unsigned base) {
  if (base < 2) throw PreconditionError("base must be >= 2");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Integer parse_int(const std::string& s) {
  const Rational r = Rational::parse(s);
  if (!r.is_integer()) throw PreconditionError("expected an integer, got '" + s + "'");
  return r.num();
}

std::vector<Integer> parse_list(const std::string& s) {
  std::vector<Integer> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_int(t));
  return out;
}

}  // namespace

std::uint64_t digit_count(const Integer& n, unsigned base) {
  check_base(base);
  if (sgn(n) <= 0) throw PreconditionError("digit_count needs n >= 1");
  // mpz_sizeinbase is exact for powers of two and may overshoot by one otherwise.
  std::uint64_t k = mpz_sizeinbase(n.get_mpz_t(), static_cast<int>(std::min(base, 62u)));
  if (base > 62) k = mpz_sizeinbase(n.get_mpz_t(), 2);
  while (k > 1 && ipow(Integer(base), k - 1) > n) --k;
  while (ipow(Integer(base), k) <= n) ++k;
  return k;
}

std::vector<std::uint8_t> to_digits(const Integer& n, unsigned base) {
  check_base(base);
  if (base > 256) throw PreconditionError("bases above 256 are not supported");
  if (sgn(n) < 0) throw PreconditionError("to_digits needs n >= 0");
  if (sgn(n) == 0) return {0};
  std::vector<std::uint8_t> out;
  Integer m = n;
  while (sgn(m) > 0) {
    Integer r;
    mpz_fdiv_qr_ui(m.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), base);
    out.push_back(static_cast<std::uint8_t>(r.get_ui()));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool is_proper_power(unsigned base) {
  check_base(base);
  return mpz_perfect_power_p(Integer(base).get_mpz_t()) != 0;
}

// ---------------------------------------------------------------- Sequence

Sequence Sequence::parse(std::string_view spec, unsigned base) {
  check_base(base);
  Sequence s;
  s.spec_ = std::string(spec);
  const auto colon = spec.find(':');
  const std::string head(spec.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  if (head == "n" && arg.empty()) {
    s.kind_ = Kind::Identity;
  } else if (head == "repunit") {
    s.kind_ = Kind::Repunit;
    s.a_ = arg.empty() ? Integer(base) : parse_int(arg);
    if (s.a_ < 2) throw PreconditionError("repunit base must be >= 2");
  } else if (head == "pow") {
    s.kind_ = Kind::Power;
    s.a_ = parse_int(arg);
    if (s.a_ < 1) throw PreconditionError("pow base must be >= 1");
  } else if (head == "poly") {
    s.kind_ = Kind::Poly;
    s.poly_ = IntPolynomial::parse(arg);
  } else if (head == "linrec") {
    s.kind_ = Kind::LinRec;
    const auto parts = split(arg, ';');
    if (parts.size() < 2 || parts.size() > 3) {
      throw PreconditionError("linrec expects c1,..,ck;f1,..,fk[;d]");
    }
    s.coeffs_ = parse_list(parts[0]);
    s.init_ = parse_list(parts[1]);
    s.shift_ = parts.size() == 3 ? parse_int(parts[2]) : Integer(0);
    if (s.coeffs_.size() != s.init_.size()) {
      throw PreconditionError("linrec needs as many initial values as coefficients");
    }
    s.memo_ = s.init_;
  } else if (head == "table") {
    s.kind_ = Kind::Table;
    s.table_ = parse_list(arg);
  } else {
    throw PreconditionError("unknown sequence spec '" + std::string(spec) + "'");
  }
  return s;
}

Sequence Sequence::table(std::vector<Integer> values) {
  Sequence s;
  s.kind_ = Kind::Table;
  s.table_ = std::move(values);
  s.spec_ = "table";
  return s;
}

Integer Sequence::operator()(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("sequences are indexed from 1");
  switch (kind_) {
    case Kind::Identity:
      return Integer(static_cast<unsigned long>(n));
    case Kind::Repunit:
      return (ipow(a_, n) - 1) / (a_ - 1);
    case Kind::Power:
      return ipow(a_, n);
    case Kind::Poly:
      return poly_(Integer(static_cast<unsigned long>(n)));
    case Kind::LinRec: {
      const std::size_t k = coeffs_.size();
      while (memo_.size() < n) {
        Integer v = shift_;
        const std::size_t m = memo_.size();
        for (std::size_t i = 0; i < k; ++i) v += coeffs_[i] * memo_[m - 1 - i];
        memo_.push_back(v);
      }
      return memo_[n - 1];
    }
    case Kind::Table:
      if (n > table_.size()) {
        throw CapacityError("sequence table has " + std::to_string(table_.size()) +
                            " values; f(" + std::to_string(n) + ") requested");
      }
      return table_[n - 1];
  }
  return 0;
}

// ---------------------------------------------------------------- DigitStream

DigitStream::DigitStream(Sequence f, unsigned base) : f_(std::move(f)), base_(base) {
  check_base(base);
  if (base > 256) throw PreconditionError("bases above 256 are not supported");
}

void DigitStream::extend_to(std::uint64_t L) {
  while (digits_.size() < L) {
    const std::uint64_t n = starts_.size() + 1;
    const Integer v = f_(n);
    if (sgn(v) <= 0) {
      throw PreconditionError("f(" + std::to_string(n) + ") = " + v.get_str() +
                              " is not positive");
    }
    starts_.push_back(digits_.size() + 1);
    const auto d = to_digits(v, base_);
    digits_.insert(digits_.end(), d.begin(), d.end());
  }
}

std::uint64_t DigitStream::block_of(std::uint64_t pos) const {
  if (pos == 0 || pos > digits_.size()) throw PreconditionError("digit position out of range");
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), pos);
  return static_cast<std::uint64_t>(it - starts_.begin());
}

std::string DigitStream::str(bool blocks) const {
  static const char* sym = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  std::size_t next = 1;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (blocks && i > 0 && next < starts_.size() && starts_[next] == i + 1) {
      out += '|';
      ++next;
    }
    if (base_ <= 36) {
      out += sym[digits_[i]];
    } else {
      if (i) out += ' ';
      out += std::to_string(digits_[i]);
    }
  }
  return out;
}

DigitStream build_stream(Sequence f, unsigned base, std::uint64_t L) {
  DigitStream s(std::move(f), base);
  s.extend_to(L);
  return s;
}

std::vector<std::uint8_t> expand_rational(const Rational& x, unsigned base, std::uint64_t L) {
  check_base(base);
  if (x.sign() < 0 || x >= Rational(1)) throw PreconditionError("expand_rational needs 0 <= x < 1");
  std::vector<std::uint8_t> out;
  out.reserve(L);
  Integer num = x.num();
  const Integer den = x.den();
  for (std::uint64_t i = 0; i < L; ++i) {
    num *= base;
    Integer q;
    mpz_fdiv_qr(q.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(static_cast<std::uint8_t>(q.get_ui()));
  }
  return out;
}

// ---------------------------------------------------------------- periods

PeriodReport detect_period(const std::vector<std::uint8_t>& d, unsigned base, std::uint64_t S,
                           std::uint64_t Pmax) {
  check_base(base);
  if (Pmax < 1) throw PreconditionError("max period must be >= 1");
  const std::uint64_t need = S + 3 * Pmax;
  if (d.size() < need) {
    throw CapacityError("period detection needs " + std::to_string(need) + " digits; have " +
                        std::to_string(d.size()));
  }
  PeriodReport r;
  r.verified_digits = d.size();
  const std::uint64_t L = d.size();
  std::uint64_t best_s = S + 1, best_p = 0;
  for (std::uint64_t p = 1; p <= Pmax; ++p) {
    // smallest s with d[i] == d[i+p] for all s <= i < L - p
    std::uint64_t s = 0;
    for (std::uint64_t i = L - p; i-- > 0;) {
      if (d[i] != d[i + p]) {
        s = i + 1;
        break;
      }
    }
    if (s < best_s) {
      best_s = s;
      best_p = p;
    }
  }
  if (best_s > S) return r;
  r.found = true;
  r.s = best_s;
  r.p = best_p;
  const Integer b(base);
  Integer A = 0, B = 0;
  for (std::uint64_t i = 0; i < r.s; ++i) A = A * b + d[i];
  for (std::uint64_t i = r.s; i < r.s + r.p; ++i) B = B * b + d[i];
  const Integer bp1 = ipow(b, r.p) - 1;
  r.reconstructed = Rational(A * bp1 + B, ipow(b, r.s) * bp1);
  // an all-(b-1) window reconstructs to 1, which has no expansion in [0, 1)
  if (r.reconstructed < Rational(1) && expand_rational(r.reconstructed, base, L) != d) {
    throw std::logic_error("reconstructed rational does not re-expand to the digits");
  }
  return r;
}

PeriodReport detect_period(const DigitStream& stream, std::uint64_t S, std::uint64_t Pmax) {
  return detect_period(stream.digits(), stream.base(), S, Pmax);
}

std::string PeriodReport::json() const {
  nlohmann::json j = {{"found", found}, {"verified_digits", verified_digits}};
  if (found) {
    j["s"] = s;
    j["p"] = p;
    // plain numbers while they fit in 64 bits, decimal strings beyond
    auto put = [&](const char* key, const Integer& z) {
      if (z.fits_slong_p()) {
        j[key] = z.get_si();
      } else {
        j[key] = z.get_str();
      }
    };
    put("num", reconstructed.num());
    put("den", reconstructed.den());
  }
  return j.dump();
}

// ---------------------------------------------------------------- ratio diagnostics

Theorem2Report check_theorem2_conclusion(const Sequence& f, unsigned base, std::uint64_t n1,
                                         std::uint64_t n2, std::optional<Integer> c_candidate) {
  check_base(base);
  if (n1 < 1 || n2 < n1) throw PreconditionError("check needs 1 <= n1 <= n2");
  Theorem2Report r;
  r.base = base;
  r.base_proper_power = is_proper_power(base);
  r.n1 = n1;
  r.n2 = n2;
  std::vector<Integer> vals;
  for (std::uint64_t n = n1; n <= n2 + 1; ++n) vals.push_back(f(n));
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    if (sgn(vals[i]) == 0) throw PreconditionError("f vanishes inside the range");
    r.ratios.push_back(Rational(vals[i + 1], vals[i]).to_double());
  }
  const std::size_t count = r.ratios.size();
  const std::size_t q_start = count - std::max<std::size_t>(1, count / 4);
  double sum = 0;
  for (std::size_t i = q_start; i < count; ++i) sum += r.ratios[i];
  r.limit_estimate = sum / static_cast<double>(count - q_start);
  for (std::size_t i = q_start; i < count; ++i) {
    r.last_quartile_max_dev =
        std::max(r.last_quartile_max_dev, std::fabs(r.ratios[i] - r.limit_estimate));
  }
  // nearest b^k on a log scale, k >= 0
  const double lb = r.limit_estimate > 0 ? std::log(r.limit_estimate) / std::log(double(base)) : 0;
  r.nearest_exponent = static_cast<std::uint64_t>(std::max(0.0, std::round(lb)));
  r.nearest_power = ipow(Integer(base), r.nearest_exponent);
  r.relative_gap = std::fabs(r.limit_estimate - r.nearest_power.get_d()) / r.nearest_power.get_d();
  r.is_power_of_base = r.relative_gap < 1e-6;
  r.c = c_candidate ? *c_candidate : r.nearest_power;
  r.max_deviation = 0;
  r.max_deviation_early = 0;
  r.max_deviation_late = 0;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const Integer dev = abs(vals[i + 1] - r.c * vals[i]);
    if (dev > r.max_deviation) r.max_deviation = dev;
    Integer& bucket = i >= q_start ? r.max_deviation_late : r.max_deviation_early;
    if (dev > bucket) bucket = dev;
  }
  r.bounded_evidence = count < 4 ? r.max_deviation_late <= r.max_deviation
                                 : r.max_deviation_late <= r.max_deviation_early;
  return r;
}

std::string Theorem2Report::json() const {
  nlohmann::json j = {{"base", base},
                      {"base_proper_power", base_proper_power},
                      {"n1", n1},
                      {"n2", n2},
                      {"limit_estimate", limit_estimate},
                      {"last_quartile_max_dev", last_quartile_max_dev},
                      {"nearest_power", nearest_power.get_str()},
                      {"nearest_exponent", nearest_exponent},
                      {"relative_gap", relative_gap},
                      {"is_power_of_base", is_power_of_base},
                      {"c", c.get_str()},
                      {"max_deviation", max_deviation.get_str()},
                      {"max_deviation_early", max_deviation_early.get_str()},
                      {"max_deviation_late", max_deviation_late.get_str()},
                      {"bounded_evidence", bounded_evidence}};
  return j.dump();
}

}  // namespace irratlab::digits
