#include "irratlab/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <json.hpp>

#include "irratlab/primes.hpp"

namespace irratlab::equidist {

Mod1Sequence::Mod1Sequence(std::vector<Rational> entries, Rational max_radius)
    : x_(std::move(entries)), radius_(std::move(max_radius)) {
  for (const auto& v : x_) {
    if (v.sign() < 0 || v >= Rational(1)) {
      throw PreconditionError("Mod1Sequence entry " + v.str() + " outside [0, 1)");
    }
  }
  if (radius_.sign() < 0) throw PreconditionError("negative radius");
}

Mod1Sequence Mod1Sequence::from_values(const std::vector<Rational>& values) {
  std::vector<Rational> f;
  f.reserve(values.size());
  for (const auto& v : values) f.push_back(v.frac());
  return Mod1Sequence(std::move(f));
}

namespace {

constexpr unsigned kEntryBits = 40;

Rational thm1_entry(const Thm1Phase& ph, unsigned M, std::int64_t n) {
  const Rational width = Rational(Integer(1), Integer(1) << kEntryBits);
  auto attempt = [&](unsigned prec) -> std::optional<Rational> {
    CertifiedReal sum = CertifiedReal::exact_integer(0, prec);
    Integer denom = 1;
    for (unsigned nu = 1; nu <= M; ++nu) {
      const Integer m(static_cast<long>(n + nu));
      denom *= m;
      CertifiedReal term = CertifiedReal::exact_integer(0, prec);
      for (std::size_t i = 0; i < ph.a.size(); ++i) {
        if (sgn(ph.a[i]) == 0) continue;
        term = term + pow_rational(m, ph.lambdas[i], prec) * ph.a[i];
      }
      sum = sum + term / denom;
    }
    if (sum.is_exact()) return sum.mid().frac();
    if (Rational(2) * sum.rad() >= width || sum.straddles_multiple_of(Rational(1))) {
      return std::nullopt;
    }
    return sum.mid().frac();
  };
  return escalate_precision(64, kMaxPrecisionBits, attempt, "fractional part fold");
}

Rational eval_q(const IntPolynomial& Q, const Rational& v) { return Q(v); }

double eval_q(const IntPolynomial& Q, double v) {
  double acc = 0;
  const auto& c = Q.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * v + c[i].get_d();
  return acc;
}

double frac_d(double v) { return v - std::floor(v); }

Rational star_discrepancy_sorted(const std::vector<Rational>& sorted) {
  const Integer N(static_cast<unsigned long>(sorted.size()));
  Rational best(0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Integer k(static_cast<unsigned long>(i + 1));
    const Rational above = Rational(k, N) - sorted[i];
    const Rational below = sorted[i] - Rational(k - 1, N);
    if (above > best) best = above;
    if (below > best) best = below;
  }
  return best;
}

}  // namespace

Mod1Sequence frac_parts(const PhaseSpec& spec, std::int64_t n1, std::int64_t n2,
                        const primes::PrimeTable* table) {
  if (n1 > n2) throw PreconditionError("frac_parts needs n1 <= n2");
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n2 - n1 + 1));
  Rational radius(0);

  if (const auto* ph = std::get_if<Thm1Phase>(&spec)) {
    if (ph->a.empty() || ph->a.size() != ph->lambdas.size()) {
      throw PreconditionError("thm1 phase needs matching coefficient/exponent lists");
    }
    for (std::size_t i = 0; i < ph->lambdas.size(); ++i) {
      if (ph->lambdas[i].sign() < 0) throw PreconditionError("thm1 phase needs lambda_i >= 0");
      if (i && !(ph->lambdas[i - 1] < ph->lambdas[i])) {
        throw PreconditionError("thm1 phase needs strictly increasing exponents");
      }
    }
    if (n1 < 0) throw PreconditionError("thm1 phase needs n >= 0");
    const unsigned M =
        ph->M ? ph->M : static_cast<unsigned>(ph->lambdas.back().floor().get_ui()) + 1;
    for (std::int64_t n = n1; n <= n2; ++n) out.push_back(thm1_entry(*ph, M, n));
    radius = Rational(Integer(1), Integer(1) << kEntryBits);
  } else if (const auto* pl = std::get_if<PolyOfLi>(&spec)) {
    if (pl->Q.degree() < 1) throw PreconditionError("poly_of_li needs a nonconstant Q");
    if (n1 < 1) throw PreconditionError("poly_of_li needs n >= 1");
    if (!pl->use_li_inverse) {
      if (!table) throw PreconditionError("poly_of_li needs a prime table");
      table->nth_prime(static_cast<std::uint64_t>(n2));  // capacity check
      const auto ps = table->primes();
      for (std::int64_t n = n1; n <= n2; ++n) {
        const Rational v(Integer(static_cast<unsigned long>(ps[static_cast<std::size_t>(n - 1)])),
                         Integer(static_cast<long>(n)));
        out.push_back(eval_q(pl->Q, v).frac());
      }
    } else {
      if (n1 < 2) throw PreconditionError("li inverse needs n >= 2");
      const auto run = primes::li_inverse_run(n1, n2, 1e-9);
      double worst = 0;
      for (std::size_t i = 0; i < run.size(); ++i) {
        const double n = static_cast<double>(n1) + static_cast<double>(i);
        const double v = run[i].value / n;
        const double q = eval_q(pl->Q, v);
        out.push_back(Rational::from_double(frac_d(q)).frac());
        // |dy| <= residual * log y; the derivative of Q bounded by a crude sum
        double dq = 0;
        const auto& c = pl->Q.coeffs();
        for (std::size_t k = 1; k < c.size(); ++k) {
          dq += static_cast<double>(k) * std::fabs(c[k].get_d()) * std::pow(std::fabs(v) + 1, k - 1);
        }
        const double err = dq * run[i].residual * std::log(run[i].value) / n +
                           8 * std::numeric_limits<double>::epsilon() * (std::fabs(q) + 1);
        worst = std::max(worst, err);
      }
      radius = Rational::from_double(worst);
    }
  } else {
    const auto& cl = std::get<CustomLinear>(spec);
    for (std::int64_t n = n1; n <= n2; ++n) out.push_back((cl.alpha * Rational(n)).frac());
  }
  return Mod1Sequence(std::move(out), radius);
}

Rational star_discrepancy(const Mod1Sequence& seq) {
  if (seq.size() == 0) throw PreconditionError("discrepancy of an empty sequence");
  std::vector<Rational> s = seq.entries();
  std::sort(s.begin(), s.end());
  return star_discrepancy_sorted(s);
}

double exp_sum(const Mod1Sequence& seq, std::int64_t h) {
  double re = 0, im = 0;
  const Rational H(h);
  for (const auto& x : seq.entries()) {
    const double phase = 2 * std::numbers::pi * (H * x).frac().to_double();
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return std::min(std::hypot(re, im), static_cast<double>(seq.size()));
}

double exp_sum_error(std::size_t N) { return static_cast<double>(N) * std::ldexp(1.0, -45); }

double erdos_turan_rhs(const Mod1Sequence& seq, std::int64_t H) {
  if (H < 1) throw PreconditionError("Erdos-Turan needs H >= 1");
  if (seq.size() == 0) throw PreconditionError("Erdos-Turan needs N >= 1");
  double sum = 0;
  for (std::int64_t h = 1; h <= H; ++h) sum += exp_sum(seq, h) / static_cast<double>(h);
  return 1.0 / static_cast<double>(H + 1) + 3.0 / static_cast<double>(seq.size()) * sum;
}

double weyl_vdc_rhs(double N, double lambda, double alpha, int q) {
  if (!(lambda > 0)) throw PreconditionError("weyl_vdc_rhs needs lambda > 0");
  if (!(alpha >= 1)) throw PreconditionError("weyl_vdc_rhs needs alpha >= 1");
  if (!(N >= 1)) throw PreconditionError("weyl_vdc_rhs needs N >= 1");
  if (q < 0 || q > 30) throw PreconditionError("weyl_vdc_rhs needs 0 <= q <= 30");
  if (q == 0) return alpha * N * std::sqrt(lambda) + 1 / std::sqrt(lambda);
  const double Q = std::ldexp(1.0, q);
  return N * std::pow(alpha * alpha * lambda, 1 / (4 * Q - 2)) +
         std::pow(N, 1 - 1 / (2 * Q)) * std::pow(alpha, 1 / (2 * Q)) +
         std::pow(N, 1 - 1 / (2 * Q) + 1 / (Q * Q)) * std::pow(lambda, -1 / (2 * Q));
}

double lemma6_envelope(double x, double C) {
  return C * std::pow(x, 2.0 / 3.0) * std::cbrt(std::log(x));
}

Lemma6Report lemma6_experiment(const IntPolynomial& Q, std::int64_t x, std::int64_t H,
                               const primes::PrimeTable& table, double C, double c,
                               bool li_mode) {
  if (Q.degree() < 1) throw PreconditionError("lemma6 needs a nonconstant Q");
  if (x < 2) throw PreconditionError("lemma6 needs x >= 2");
  if (H < 1) throw PreconditionError("lemma6 needs H >= 1");
  Lemma6Report r;
  r.x = x;
  r.N = x + 1;
  r.H = H;
  r.C = C;
  r.c = c;
  const Mod1Sequence seq = frac_parts(PolyOfLi{Q, false}, x, 2 * x, &table);
  r.discrepancy_star = star_discrepancy(seq);
  r.discrepancy_unnormalized = r.discrepancy_star * Rational(r.N);
  r.et_rhs = erdos_turan_rhs(seq, H);
  const double lx = std::log(static_cast<double>(x));
  const double M = Q.max_abs_coeff().get_d();
  const double d = Q.degree();
  const double xd = static_cast<double>(x);
  r.lemma6_rhs = C * (xd * std::exp(-c * std::sqrt(lx)) +
                      std::cbrt(M) * std::pow(xd, 2.0 / 3.0) * std::pow(lx, d / 3.0));
  r.ratio = r.discrepancy_unnormalized.to_double() / r.lemma6_rhs;

  if (li_mode) {
    r.li_mode = true;
    const Mod1Sequence li_seq = frac_parts(PolyOfLi{Q, true}, x, 2 * x, nullptr);
    r.li_discrepancy_star = star_discrepancy(li_seq).to_double();
    const auto run = primes::li_inverse_run(x, 2 * x, 1e-9);
    const auto ps = table.primes();
    for (std::int64_t n = x; n <= 2 * x; ++n) {
      const double nd = static_cast<double>(n);
      const double exact =
          eval_q(Q, Rational(Integer(static_cast<unsigned long>(ps[static_cast<std::size_t>(n - 1)])),
                             Integer(static_cast<long>(n))))
              .to_double();
      const double approx = eval_q(Q, run[static_cast<std::size_t>(n - x)].value / nd);
      r.max_substitution_gap = std::max(r.max_substitution_gap, std::fabs(exact - approx));
    }
  }
  return r;
}

std::string Lemma6Report::json() const {
  nlohmann::json j = {{"x", x},
                      {"N", N},
                      {"discrepancy_star", discrepancy_star.to_double()},
                      {"discrepancy_star_exact", discrepancy_star.str()},
                      {"discrepancy_unnormalized", discrepancy_unnormalized.to_double()},
                      {"et_rhs", et_rhs},
                      {"H", H},
                      {"lemma6_rhs", lemma6_rhs},
                      {"C", C},
                      {"c", c},
                      {"ratio", ratio}};
  if (li_mode) {
    j["li_discrepancy_star"] = li_discrepancy_star;
    j["max_substitution_gap"] = max_substitution_gap;
  }
  return j.dump();
}

}  // namespace irratlab::equidist
