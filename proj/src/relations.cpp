#include "irratlab/relations.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <optional>

#include <json.hpp>

#include "irratlab/primes.hpp"
#include "irratlab/series.hpp"

namespace irratlab::relations {

namespace {

// Minimal owning mpfr_t; every value in one PSLQ run shares a precision.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mp& operator=(const Mp& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

void swap_mp(Mp& a, Mp& b) { mpfr_swap(a.get(), b.get()); }

Integer nint(const Mp& x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDN);
  return z;
}

Rational pow2_neg(unsigned k) { return Rational(Integer(1), Integer(1) << k); }

std::string sci(const Rational& q) {
  Mp t(64);
  mpfr_set_q(t.get(), q.get().get_mpq_t(), MPFR_RNDU);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.6Re", t.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

unsigned digits_to_bits(unsigned digits) {
  return static_cast<unsigned>(std::ceil(digits * std::log2(10.0)));
}

RealVector::RealVector(std::vector<CertifiedReal> entries, std::vector<std::string> labels,
                       unsigned prec)
    : x_(std::move(entries)), labels_(std::move(labels)), prec_(prec) {
  if (x_.size() < 2) throw PreconditionError("a relation vector needs at least 2 entries");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < x_.size(); ++i) labels_.push_back("x" + std::to_string(i + 1));
  }
  if (labels_.size() != x_.size()) throw PreconditionError("one label per entry");
  if (prec_ < 16) throw PreconditionError("precision must be at least 16 bits");
  const Rational cap = prec_ >= 8 ? pow2_neg(prec_ - 8) : Rational(1);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (x_[i].rad() > cap) {
      throw PreconditionError("entry " + labels_[i] + " is not certified to " +
                              std::to_string(prec_) + " bits");
    }
  }
}

RealVector RealVector::exact(const std::vector<Rational>& values, unsigned prec) {
  std::vector<CertifiedReal> e;
  std::vector<std::string> labels;
  for (const auto& v : values) {
    // from_ball with zero radius keeps the rational exactly when it is dyadic;
    // otherwise the rounding radius is below 2^-prec.
    e.push_back(CertifiedReal::from_rational(v, prec));
    labels.push_back(v.str());
  }
  return RealVector(std::move(e), std::move(labels), prec);
}

bool RealVector::all_exact() const {
  return std::all_of(x_.begin(), x_.end(), [](const CertifiedReal& c) { return c.is_exact(); });
}

unsigned required_bits(std::size_t n, const Integer& max_norm) {
  const unsigned lg = static_cast<unsigned>(mpz_sizeinbase(max_norm.get_mpz_t(), 2));
  return static_cast<unsigned>(n) * lg + 64;
}

PslqResult pslq(const RealVector& v, const Integer& max_norm, std::uint64_t iter_cap) {
  if (max_norm < 1) throw PreconditionError("max_norm must be >= 1");
  const std::size_t n = v.size();
  const unsigned need = required_bits(n, max_norm);
  if (v.prec() < need) {
    throw PreconditionError("precision too low for max_norm " + max_norm.get_str() + ": need " +
                            std::to_string(need) + " bits, have " + std::to_string(v.prec()));
  }
  const mpfr_prec_t wp = v.prec() + 32;
  PslqResult res;

  auto finish_relation = [&](std::vector<Integer> a) {
    Integer g = 0;
    for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : a) c /= g;
    const auto first = std::find_if(a.begin(), a.end(), [](const Integer& c) { return sgn(c) != 0; });
    if (sgn(*first) < 0) {
      for (auto& c : a) c = -c;
    }
    Rational sum(0), allowance = pow2_neg(v.prec() / 2);
    for (std::size_t i = 0; i < n; ++i) {
      sum += v.entries()[i].mid() * Rational(a[i]);
      allowance += v.entries()[i].rad() * Rational(Integer(abs(a[i])));
    }
    res.residual = sum.abs();
    res.allowance = allowance;
    if (res.residual > res.allowance) {
      throw PrecisionError("PSLQ candidate relation fails the residual check; raise precision");
    }
    res.outcome = PslqResult::Outcome::Relation;
    res.coefficients = std::move(a);
    res.exact = v.all_exact() && res.residual.is_zero();
    return res;
  };

  // x as mpfr
  std::vector<Mp> x;
  for (const auto& e : v.entries()) {
    x.emplace_back(wp);
    const Rational m = e.mid();
    mpfr_set_q(x.back().get(), m.get().get_mpq_t(), MPFR_RNDN);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (v.entries()[i].contains_zero()) {
      std::vector<Integer> a(n, Integer(0));
      a[i] = 1;
      return finish_relation(std::move(a));
    }
  }

  // s_j = sqrt(sum_{k >= j} x_k^2), y = x / s_0
  std::vector<Mp> s(n, Mp(wp)), y(n, Mp(wp));
  Mp acc(wp), t0(wp), t1(wp), t2(wp), t3(wp), t4(wp);
  for (std::size_t j = n; j-- > 0;) {
    mpfr_sqr(t0.get(), x[j].get(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), t0.get(), MPFR_RNDN);
    mpfr_sqrt(s[j].get(), acc.get(), MPFR_RNDN);
  }
  for (std::size_t j = 0; j < n; ++j) mpfr_div(y[j].get(), x[j].get(), s[0].get(), MPFR_RNDN);
  Mp s0(s[0]);
  for (std::size_t j = 0; j < n; ++j) mpfr_div(s[j].get(), s[j].get(), s0.get(), MPFR_RNDN);

  const std::size_t m1 = n - 1;
  std::vector<std::vector<Mp>> H(n, std::vector<Mp>(m1, Mp(wp)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m1 && j <= i; ++j) {
      if (i == j) {
        mpfr_div(H[i][j].get(), s[j + 1].get(), s[j].get(), MPFR_RNDN);
      } else {
        mpfr_mul(t0.get(), y[i].get(), y[j].get(), MPFR_RNDN);
        mpfr_mul(t1.get(), s[j].get(), s[j + 1].get(), MPFR_RNDN);
        mpfr_div(H[i][j].get(), t0.get(), t1.get(), MPFR_RNDN);
        mpfr_neg(H[i][j].get(), H[i][j].get(), MPFR_RNDN);
      }
    }
  }
  std::vector<std::vector<Integer>> A(n, std::vector<Integer>(n, Integer(0))), B = A;
  for (std::size_t i = 0; i < n; ++i) A[i][i] = B[i][i] = 1;

  Mp tz(wp);
  auto reduce = [&](std::size_t from) {
    for (std::size_t i = std::max<std::size_t>(from, 1); i < n; ++i) {
      for (std::size_t j = std::min(i - 1, m1 - 1) + 1; j-- > 0;) {
        if (mpfr_zero_p(H[j][j].get())) continue;
        mpfr_div(t0.get(), H[i][j].get(), H[j][j].get(), MPFR_RNDN);
        const Integer t = nint(t0);
        if (sgn(t) == 0) continue;
        mpfr_set_z(tz.get(), t.get_mpz_t(), MPFR_RNDN);
        mpfr_mul(t1.get(), tz.get(), y[i].get(), MPFR_RNDN);
        mpfr_add(y[j].get(), y[j].get(), t1.get(), MPFR_RNDN);
        for (std::size_t k = 0; k <= j; ++k) {
          mpfr_mul(t1.get(), tz.get(), H[j][k].get(), MPFR_RNDN);
          mpfr_sub(H[i][k].get(), H[i][k].get(), t1.get(), MPFR_RNDN);
        }
        for (std::size_t k = 0; k < n; ++k) {
          A[i][k] -= t * A[j][k];
          B[k][j] += t * B[k][i];
        }
      }
    }
  };
  reduce(1);

  // gamma > sqrt(4/3)
  Mp gamma(wp), gpow(wp), best(wp), eps(wp), bound(wp), ymin(wp);
  mpfr_set_ui(gamma.get(), 4, MPFR_RNDN);
  mpfr_div_ui(gamma.get(), gamma.get(), 3, MPFR_RNDN);
  mpfr_sqrt(gamma.get(), gamma.get(), MPFR_RNDN);
  mpfr_add_d(gamma.get(), gamma.get(), 1e-3, MPFR_RNDN);
  // a genuine relation of norm <= max_norm leaves |y_j| <= |a| 2^(8-prec) (times sqrt n)
  const long lg = static_cast<long>(mpz_sizeinbase(max_norm.get_mpz_t(), 2));
  mpfr_set_ui_2exp(eps.get(), 1, lg + 40 - static_cast<long>(v.prec()), MPFR_RNDN);

  auto relation_column = [&]() -> std::optional<std::size_t> {
    std::optional<std::size_t> arg;
    for (std::size_t j = 0; j < n; ++j) {
      mpfr_abs(t0.get(), y[j].get(), MPFR_RNDN);
      if (mpfr_cmp(t0.get(), eps.get()) < 0 && (!arg || mpfr_cmp(t0.get(), ymin.get()) < 0)) {
        arg = j;
        mpfr_set(ymin.get(), t0.get(), MPFR_RNDN);
      }
    }
    return arg;
  };
  auto current_bound = [&]() {
    mpfr_set_zero(best.get(), 1);
    for (std::size_t j = 0; j < m1; ++j) {
      mpfr_abs(t0.get(), H[j][j].get(), MPFR_RNDN);
      if (mpfr_cmp(t0.get(), best.get()) > 0) mpfr_set(best.get(), t0.get(), MPFR_RNDN);
    }
    if (mpfr_zero_p(best.get())) return std::numeric_limits<double>::infinity();
    mpfr_ui_div(bound.get(), 1, best.get(), MPFR_RNDD);
    return mpfr_get_d(bound.get(), MPFR_RNDD);
  };
  auto column = [&](std::size_t j) {
    std::vector<Integer> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = B[k][j];
    return a;
  };

  const double limit = max_norm.get_d();
  for (res.iterations = 0; res.iterations < iter_cap; ++res.iterations) {
    if (auto j = relation_column()) {
      res.bound = current_bound();
      return finish_relation(column(*j));
    }
    res.bound = current_bound();
    if (res.bound > limit) {
      res.outcome = PslqResult::Outcome::Exclusion;
      return res;
    }
    // pick m maximizing gamma^(i+1) |H_ii|
    std::size_t m = 0;
    mpfr_set_zero(best.get(), 1);
    mpfr_set(gpow.get(), gamma.get(), MPFR_RNDN);
    for (std::size_t i = 0; i < m1; ++i) {
      mpfr_abs(t0.get(), H[i][i].get(), MPFR_RNDN);
      mpfr_mul(t0.get(), t0.get(), gpow.get(), MPFR_RNDN);
      if (mpfr_cmp(t0.get(), best.get()) > 0) {
        mpfr_set(best.get(), t0.get(), MPFR_RNDN);
        m = i;
      }
      mpfr_mul(gpow.get(), gpow.get(), gamma.get(), MPFR_RNDN);
    }
    swap_mp(y[m], y[m + 1]);
    std::swap(A[m], A[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (std::size_t k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
    if (m + 1 < m1) {
      mpfr_hypot(t0.get(), H[m][m].get(), H[m][m + 1].get(), MPFR_RNDN);
      if (!mpfr_zero_p(t0.get())) {
        mpfr_div(t1.get(), H[m][m].get(), t0.get(), MPFR_RNDN);
        mpfr_div(t2.get(), H[m][m + 1].get(), t0.get(), MPFR_RNDN);
        Mp a(wp), b(wp);
        for (std::size_t i = m; i < n; ++i) {
          mpfr_set(t3.get(), H[i][m].get(), MPFR_RNDN);
          mpfr_set(t4.get(), H[i][m + 1].get(), MPFR_RNDN);
          mpfr_mul(a.get(), t1.get(), t3.get(), MPFR_RNDN);
          mpfr_mul(b.get(), t2.get(), t4.get(), MPFR_RNDN);
          mpfr_add(H[i][m].get(), a.get(), b.get(), MPFR_RNDN);
          mpfr_mul(a.get(), t1.get(), t4.get(), MPFR_RNDN);
          mpfr_mul(b.get(), t2.get(), t3.get(), MPFR_RNDN);
          mpfr_sub(H[i][m + 1].get(), a.get(), b.get(), MPFR_RNDN);
        }
      }
    }
    reduce(m + 1);
    // a vanishing last diagonal entry means the last column of B is a relation
    mpfr_abs(t0.get(), H[m1 - 1][m1 - 1].get(), MPFR_RNDN);
    if (mpfr_cmp(t0.get(), eps.get()) < 0) {
      if (auto j = relation_column()) {
        res.bound = current_bound();
        return finish_relation(column(*j));
      }
    }
  }
  res.outcome = PslqResult::Outcome::Exclusion;
  res.partial = true;
  res.bound = current_bound();
  res.warning = "iteration cap " + std::to_string(iter_cap) + " reached; bound is partial";
  return res;
}

// ---------------------------------------------------------------- constants

ConstantValue evaluate_constant(const std::string& spec, unsigned bits,
                                const primes::PrimeTable* table) {
  ConstantValue c;
  c.label = spec;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const unsigned prec = bits + 8;
  if (spec == "e") {
    c.N = series::e_index_for(bits);
    c.value = series::e_partial(c.N).enclosure(prec);
  } else if (head == "S") {
    const Rational lambda = Rational::parse(arg);
    c.N = series::s_lambda_index_for(lambda, bits);
    c.value = series::s_lambda_partial(lambda, c.N).enclosure(prec);
  } else if (head == "prime") {
    IntPolynomial P;
    const bool is_exponent =
        !arg.empty() && std::all_of(arg.begin(), arg.end(), [](char ch) { return std::isdigit(ch); });
    P = is_exponent ? IntPolynomial::monomial(static_cast<unsigned>(std::stoul(arg)))
                    : IntPolynomial::parse(arg);
    c.N = series::prime_series_index_for(P, bits);
    if (table) {
      c.value = series::prime_series_partial(P, c.N, *table).enclosure(prec);
    } else {
      const primes::PrimeTable own(primes::limit_for_index(c.N));
      c.value = series::prime_series_partial(P, c.N, own).enclosure(prec);
    }
  } else if (head == "log") {
    const Rational q = Rational::parse(arg);
    if (q.sign() <= 0) throw PreconditionError("log needs a positive argument");
    c.value = log_rational(q, prec);
  } else if (colon == std::string::npos) {
    c.value = CertifiedReal::from_rational(Rational::parse(spec), prec);
  } else {
    throw PreconditionError("unknown constant spec '" + spec + "'");
  }
  return c;
}

IndependenceReport independence_experiment(const std::vector<std::string>& specs,
                                           unsigned digits, const Integer& max_norm,
                                           const primes::PrimeTable* table,
                                           std::uint64_t iter_cap) {
  if (specs.size() < 2) throw PreconditionError("independence needs at least 2 constants");
  if (digits < 5 || digits > 1000) throw PreconditionError("precision must be 5..1000 digits");
  IndependenceReport r;
  r.prec_digits = digits;
  r.prec_bits = digits_to_bits(digits);
  r.max_norm = max_norm;
  std::vector<std::future<ConstantValue>> jobs;
  for (const auto& s : specs) {
    jobs.push_back(std::async(std::launch::async, evaluate_constant, s, r.prec_bits, table));
  }
  std::vector<CertifiedReal> vals;
  std::vector<std::string> labels;
  for (auto& j : jobs) {
    r.constants.push_back(j.get());
    vals.push_back(r.constants.back().value);
    labels.push_back(r.constants.back().label);
  }
  r.result = pslq(RealVector(std::move(vals), std::move(labels), r.prec_bits), max_norm, iter_cap);
  return r;
}

std::string IndependenceReport::json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : constants) {
    cs.push_back({{"label", c.label},
                  {"N", c.N},
                  {"mid", c.value.mid_decimal(40)},
                  {"rad", c.value.rad_decimal()},
                  {"bits", c.value.prec()}});
  }
  nlohmann::json j = {{"constants", cs},
                      {"prec", prec_digits},
                      {"prec_bits", prec_bits},
                      {"max_norm", max_norm.get_str()},
                      {"iterations", result.iterations}};
  if (result.outcome == PslqResult::Outcome::Relation) {
    j["outcome"] = "relation";
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : result.coefficients) a.push_back(c.get_str());
    j["coefficients"] = a;
    j["residual"] = sci(result.residual);
    j["allowance"] = sci(result.allowance);
    j["exact"] = result.exact;
  } else {
    j["outcome"] = "exclusion";
    j["bound"] = result.bound;
    j["partial"] = result.partial;
    if (!result.warning.empty()) j["warning"] = result.warning;
  }
  return j.dump();
}

}  // namespace irratlab::relations
