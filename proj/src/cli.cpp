#include "irratlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "irratlab/digits.hpp"
#include "irratlab/equidist.hpp"
#include "irratlab/polyelim.hpp"
#include "irratlab/primes.hpp"
#include "irratlab/relations.hpp"
#include "irratlab/series.hpp"

namespace irratlab::cli {

using nlohmann::json;

namespace {

struct Report {
  json data = json::object();
  json rows = json::array();         // plot rows for --format csv
  std::vector<std::string> columns;  // empty: scalar keys of the first row
  std::string text;                  // --format text; empty: "key: value" lines
  std::string default_format = "json";
};

struct Context {
  std::string format;
  std::string output;
  std::string sieve_cache;
  std::uint64_t seed = 1;
  std::ostream* err = &std::cerr;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    std::string t;
    for (char ch : cur) {
      if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    }
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<Rational> rational_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& t : split_list(s)) out.push_back(Rational::parse(t));
  return out;
}

std::vector<std::int64_t> int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& t : split_list(s)) {
    const Rational r = Rational::parse(t);
    if (!r.is_integer() || !r.num().fits_slong_p()) {
      throw PreconditionError("expected a 64-bit integer, got '" + t + "'");
    }
    out.push_back(r.num().get_si());
  }
  return out;
}

json certified_json(const CertifiedReal& c, int digits) {
  // the printed midpoint is truncated; widen the radius to cover it
  const Rational slack(Integer(1), ipow(10, static_cast<unsigned long>(digits)));
  return {{"mid", c.mid_decimal(digits)},
          {"rad", CertifiedReal::from_ball(c.mid(), c.rad() + slack, c.prec()).rad_decimal()},
          {"bits", c.prec()}};
}

primes::PrimeTable sieve(const Context& ctx, std::uint64_t limit) {
  std::string path = ctx.sieve_cache;
  if (path.empty()) {
    if (const char* env = std::getenv("IRRATLAB_SIEVE_CACHE")) path = env;
  }
  if (limit >= 5'000'000) *ctx.err << "sieving primes up to " << limit << "\n";
  if (path.empty()) return primes::PrimeTable(limit);
  return primes::PrimeTable::cached(path, limit);
}

// ---------------------------------------------------------------- series

struct SeriesOpts {
  std::string lambda = "1/2", lambda2 = "3/2", t = "1/2", prime_poly;
  std::uint64_t n = 10;
  unsigned bits = 128;
  int digits = 30;
};

Report series_eval(const SeriesOpts& o, const Context& ctx) {
  Report r;
  series::PartialSum ps;
  if (!o.prime_poly.empty()) {
    const IntPolynomial P = IntPolynomial::parse(o.prime_poly);
    const auto table = sieve(ctx, primes::limit_for_index(o.n));
    ps = series::prime_series_partial(P, o.n, table);
    r.data["prime_poly"] = P.str();
  } else {
    ps = series::s_lambda_partial(Rational::parse(o.lambda), o.n);
    r.data["lambda"] = Rational::parse(o.lambda).str();
  }
  r.data["N"] = ps.N;
  r.data["value"] = ps.value.str();
  r.data["tail_bound"] = ps.tail_bound.str();
  r.data["enclosure"] = certified_json(ps.enclosure(o.bits), o.digits);
  r.text = ps.enclosure(o.bits).str(o.digits);
  return r;
}

Report series_tail(const SeriesOpts& o) {
  Report r;
  const Rational lambda = Rational::parse(o.lambda);
  const Rational B = series::tail_bound(lambda, o.n);
  r.data = {{"lambda", lambda.str()},
            {"N", o.n},
            {"tail_bound", B.str()},
            {"tail_bound_decimal", to_decimal(B, o.digits, true)},
            {"min_index", series::min_tail_index(lambda)}};
  return r;
}

Report series_witness(const SeriesOpts& o) {
  Report r;
  const Rational l1 = Rational::parse(o.lambda), l2 = Rational::parse(o.lambda2);
  const auto n0 = series::injectivity_witness(l1, l2);
  r.data = {{"lambda1", l1.str()}, {"lambda2", l2.str()}, {"n0", n0}};
  r.text = std::to_string(n0);
  return r;
}

Report series_cover(const SeriesOpts& o) {
  Report r;
  const Rational t = Rational::parse(o.t);
  const Integer c = series::cover_count(t, o.n);
  r.data = {{"t", t.str()},
            {"N", o.n},
            {"count", c.get_str()},
            {"bound", ipow(Integer(static_cast<unsigned long>(o.n)),
                           t.ceil().get_ui() + 2).get_str()}};
  r.text = c.get_str();
  return r;
}

// ---------------------------------------------------------------- primes

struct PrimesOpts {
  std::uint64_t n = 1, start = 1, count = 10;
  std::string x = "10000", offsets = "0,2", poly = "X1";
  double C = 1;
  std::int64_t t = 2, t_to = 0;
  double tol = 1e-8;
};

Report primes_nth(const PrimesOpts& o, const Context& ctx) {
  Report r;
  const auto table = sieve(ctx, primes::limit_for_index(o.n));
  const auto p = table.nth_prime(o.n);
  r.data = {{"n", o.n}, {"p", p}, {"sieve_limit", table.limit()}};
  r.text = std::to_string(p);
  return r;
}

Report primes_gaps(const PrimesOpts& o, const Context& ctx) {
  Report r;
  r.default_format = "text";
  const auto table = sieve(ctx, primes::limit_for_index(o.start + o.count + 1));
  const auto g = primes::gaps(table, o.start, o.count);
  r.data = {{"start", g.start}, {"gaps", g.gaps}};
  for (std::size_t i = 0; i < g.gaps.size(); ++i) {
    if (i) r.text += ",";
    r.text += std::to_string(g.gaps[i]);
    r.rows.push_back({{"n", g.start + i}, {"gap", g.gaps[i]}});
  }
  r.columns = {"n", "gap"};
  return r;
}

Report primes_constellation(const PrimesOpts& o, const Context& ctx) {
  Report r;
  std::vector<std::uint64_t> offs;
  for (auto v : int_list(o.offsets)) {
    if (v < 0) throw PreconditionError("offsets must be >= 0");
    offs.push_back(static_cast<std::uint64_t>(v));
  }
  const primes::OffsetTuple tuple(offs);
  const auto xs = int_list(o.x);
  if (xs.empty()) throw PreconditionError("--x needs at least one value");
  std::int64_t xmax = 0;
  for (auto x : xs) {
    if (x < 1) throw PreconditionError("constellation needs x >= 1");
    xmax = std::max(xmax, x);
  }
  const auto table = sieve(ctx, 2 * static_cast<std::uint64_t>(xmax) + tuple.max());
  const int k = static_cast<int>(tuple.size()) - 1;
  json runs = json::array();
  for (auto x : xs) {
    const auto c = primes::constellation_count(table, static_cast<std::uint64_t>(x), tuple);
    json row = {{"x", x}, {"count", c}, {"selberg_rhs", nullptr}, {"ratio", nullptr}};
    if (x >= 16) {  // log log x > 0
      const double shape = primes::selberg_rhs(static_cast<double>(x), k, 1.0);
      row["selberg_rhs"] = o.C * shape;
      row["ratio"] = static_cast<double>(c) / shape;
    }
    runs.push_back(row);
    r.rows.push_back(row);
  }
  json nus = json::array();
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) nus.push_back({{"p", p}, {"nu", primes::nu(p, tuple)}});
  r.data = {{"offsets", offs}, {"C", o.C}, {"runs", runs}, {"nu", nus}};
  r.columns = {"x", "count", "selberg_rhs", "ratio"};
  return r;
}

Report primes_li_inverse(const PrimesOpts& o) {
  Report r;
  const std::int64_t last = o.t_to ? o.t_to : o.t;
  if (o.t < 2 || last < o.t) throw PreconditionError("li-inverse needs 2 <= t <= to");
  const auto run = primes::li_inverse_run(o.t, last, o.tol);
  for (std::size_t i = 0; i < run.size(); ++i) {
    r.rows.push_back({{"t", o.t + static_cast<std::int64_t>(i)},
                      {"value", run[i].value},
                      {"residual", run[i].residual},
                      {"iterations", run[i].iterations}});
  }
  r.columns = {"t", "value", "residual"};
  if (run.size() == 1) {
    r.data = r.rows[0];
  } else {
    r.data = {{"runs", r.rows}};
  }
  return r;
}

Report primes_gap_poly(const PrimesOpts& o, const Context& ctx) {
  Report r;
  const auto F = polyelim::MultiPoly::parse(o.poly);
  const auto table = sieve(ctx, primes::limit_for_index(o.start + o.count + F.window() + 1));
  const auto g = primes::gap_poly_experiment(table, F, o.start, o.count);
  r.data = {{"poly", F.str()},
            {"start", o.start},
            {"count", o.count},
            {"total", g.total},
            {"nonzero", g.nonzero},
            {"rate", g.rate.str()},
            {"rate_decimal", g.rate.to_double()},
            {"gap_cap", g.gap_cap},
            {"kept", g.kept},
            {"kept_nonzero", g.kept_nonzero},
            {"discarded", g.discarded}};
  return r;
}

// ---------------------------------------------------------------- equidist

struct EquiOpts {
  std::string values, phase = "thm1", a = "1", lambdas = "3/2", Q = "x", alpha = "1/2";
  unsigned M = 0;
  bool li = false;
  std::int64_t n1 = 1, n2 = 1000, h = 1, H = 16;
  double N = 1000, lambda = 0.01, walpha = 1;
  int q = 1;
  std::string sizes, xs = "1000", C = "1", c = "1";
};

equidist::Mod1Sequence build_sequence(const EquiOpts& o, const Context& ctx) {
  if (!o.values.empty()) return equidist::Mod1Sequence::from_values(rational_list(o.values));
  if (o.phase == "thm1") {
    equidist::Thm1Phase ph;
    for (const auto& v : split_list(o.a)) ph.a.push_back(Rational::parse(v).num());
    ph.lambdas = rational_list(o.lambdas);
    ph.M = o.M;
    return equidist::frac_parts(ph, o.n1, o.n2);
  }
  if (o.phase == "li") {
    const equidist::PolyOfLi ph{IntPolynomial::parse(o.Q), o.li};
    if (o.li) return equidist::frac_parts(ph, o.n1, o.n2);
    const auto table = sieve(ctx, primes::limit_for_index(static_cast<std::uint64_t>(o.n2)));
    return equidist::frac_parts(ph, o.n1, o.n2, &table);
  }
  if (o.phase == "linear") {
    return equidist::frac_parts(equidist::CustomLinear{Rational::parse(o.alpha)}, o.n1, o.n2);
  }
  throw PreconditionError("unknown phase '" + o.phase + "' (thm1, li, linear)");
}

json seq_header(const equidist::Mod1Sequence& s) {
  return {{"N", s.size()}, {"max_radius", s.max_radius().to_double()}};
}

Report equidist_disc(const EquiOpts& o, const Context& ctx) {
  Report r;
  const auto s = build_sequence(o, ctx);
  const Rational d = equidist::star_discrepancy(s);
  r.data = seq_header(s);
  r.data["discrepancy_star"] = d.to_double();
  r.data["discrepancy_star_exact"] = d.str();
  return r;
}

Report equidist_expsum(const EquiOpts& o, const Context& ctx) {
  Report r;
  const auto s = build_sequence(o, ctx);
  r.data = seq_header(s);
  r.data["h"] = o.h;
  r.data["value"] = equidist::exp_sum(s, o.h);
  r.data["error"] = equidist::exp_sum_error(s.size());
  return r;
}

Report equidist_et(const EquiOpts& o, const Context& ctx) {
  Report r;
  const auto s = build_sequence(o, ctx);
  r.data = seq_header(s);
  r.data["H"] = o.H;
  r.data["discrepancy_star"] = equidist::star_discrepancy(s).to_double();
  r.data["et_rhs"] = equidist::erdos_turan_rhs(s, o.H);
  return r;
}

Report equidist_weyl(const EquiOpts& o) {
  Report r;
  r.data = {{"N", o.N},
            {"lambda", o.lambda},
            {"alpha", o.walpha},
            {"q", o.q},
            {"rhs", equidist::weyl_vdc_rhs(o.N, o.lambda, o.walpha, o.q)}};
  return r;
}

Report equidist_thm1(const EquiOpts& o, const Context& ctx) {
  Report r;
  EquiOpts t = o;
  t.values.clear();
  t.phase = "thm1";
  const auto s = build_sequence(t, ctx);
  std::vector<std::int64_t> sizes = o.sizes.empty() ? std::vector<std::int64_t>{}
                                                     : int_list(o.sizes);
  if (sizes.empty()) sizes.push_back(static_cast<std::int64_t>(s.size()));
  for (auto N : sizes) {
    if (N < 1 || N > static_cast<std::int64_t>(s.size())) {
      throw PreconditionError("sweep size " + std::to_string(N) + " outside 1.." +
                              std::to_string(s.size()));
    }
    const equidist::Mod1Sequence prefix(
        std::vector<Rational>(s.entries().begin(), s.entries().begin() + N), s.max_radius());
    r.rows.push_back({{"N", N}, {"discrepancy_star", equidist::star_discrepancy(prefix).to_double()}});
  }
  r.columns = {"N", "discrepancy_star"};
  r.data = {{"n1", o.n1},
            {"n2", o.n2},
            {"max_radius", s.max_radius().to_double()},
            {"N", r.rows.back()["N"]},
            {"discrepancy_star", r.rows.back()["discrepancy_star"]},
            {"sweep", r.rows}};
  return r;
}

Report equidist_lemma6(const EquiOpts& o, const Context& ctx) {
  Report r;
  const IntPolynomial Q = IntPolynomial::parse(o.Q);
  const auto xs = int_list(o.xs);
  if (xs.empty()) throw PreconditionError("--x needs at least one value");
  std::int64_t xmax = 0;
  for (auto x : xs) xmax = std::max(xmax, x);
  const auto table = sieve(ctx, primes::limit_for_index(static_cast<std::uint64_t>(2 * xmax)));
  const double C = std::stod(o.C), c = std::stod(o.c);
  json runs = json::array();
  for (auto x : xs) {
    const auto rep = equidist::lemma6_experiment(Q, x, o.H, table, C, c, o.li);
    json j = json::parse(rep.json());
    j["envelope_100"] = equidist::lemma6_envelope(static_cast<double>(x), 100);
    runs.push_back(j);
    r.rows.push_back(j);
  }
  r.columns = {"x", "discrepancy_star", "lemma6_rhs", "ratio"};
  r.data = {{"Q", Q.str()}, {"runs", runs}};
  return r;
}

// ---------------------------------------------------------------- elim

struct ElimOpts {
  std::string poly = "x", P = "X1", Q = "X1", check;
  unsigned depth = 2;
  bool trace = false;
  long nu = 1;
  int trials = 8;
  double budget = 10;
};

Report elim_run(const ElimOpts& o, const Context& ctx) {
  Report r;
  const auto run = polyelim::run_elimination(IntPolynomial::parse(o.poly), o.depth);
  if (o.trace) {
    r.data = json::parse(polyelim::trace_json(run));
  } else {
    json q = json::array();
    for (const auto& p : run.relation.q) q.push_back(p.str());
    r.data = {{"input", run.input.str()},
              {"depth", run.depth},
              {"steps", run.steps.size()},
              {"relation", {{"q", q},
                            {"scale", run.relation.scale.get_str()},
                            {"window", run.relation.window}}}};
  }
  if (!o.check.empty()) {
    const auto ns = int_list(o.check);
    std::int64_t nmax = 0;
    for (auto n : ns) nmax = std::max(nmax, n);
    const auto table = sieve(
        ctx, primes::limit_for_index(static_cast<std::uint64_t>(nmax) + 2 * run.depth + run.steps.size() + 4));
    json pts = json::array();
    bool all = true;
    for (const auto& p : polyelim::semantic_consistency(run, table, ns, o.budget)) {
      pts.push_back({{"n", p.n},
                     {"stage", p.stage},
                     {"abs_diff", p.abs_diff},
                     {"budget", p.budget},
                     {"log_power", p.log_power},
                     {"ok", p.ok}});
      r.rows.push_back(pts.back());
      all = all && p.ok;
    }
    r.data["consistency"] = {{"budget_constant", o.budget}, {"points", pts}, {"ok", all}};
    r.columns = {"n", "stage", "abs_diff", "budget", "ok"};
  }
  return r;
}

Report elim_lemma5(const ElimOpts& o, const Context& ctx) {
  Report r;
  const auto v = polyelim::lemma5_test(polyelim::MultiPoly::parse(o.P),
                                       polyelim::MultiPoly::parse(o.Q), o.nu, ctx.seed, o.trials);
  r.data = {{"P", polyelim::MultiPoly::parse(o.P).str()},
            {"Q", polyelim::MultiPoly::parse(o.Q).str()},
            {"nu", o.nu},
            {"seed", ctx.seed},
            {"combination", v.combination.str()},
            {"vanishes", v.vanishes},
            {"random_says_zero", v.random_says_zero},
            {"agree", v.agree()},
            {"prime", std::to_string(polyelim::kIdentityTestPrime)}};
  if (v.witness) r.data["witness"] = *v.witness;
  return r;
}

// ---------------------------------------------------------------- digits

struct DigitsOpts {
  std::string f = "repunit", c;
  unsigned base = 10;
  std::uint64_t digits = 100, S = 0, P = 0, n1 = 1, n2 = 50;
  bool blocks = false;
};

Report digits_build(const DigitsOpts& o) {
  Report r;
  r.default_format = "text";
  const auto s = digits::build_stream(digits::Sequence::parse(o.f, o.base), o.base, o.digits);
  r.text = s.str(o.blocks);
  r.data = {{"f", o.f},
            {"base", o.base},
            {"digits", s.str(false)},
            {"length", s.digits().size()},
            {"block_starts", s.block_starts()},
            {"proper_power_base", digits::is_proper_power(o.base)}};
  return r;
}

Report digits_detect(const DigitsOpts& o) {
  Report r;
  const auto s = digits::build_stream(digits::Sequence::parse(o.f, o.base), o.base, o.digits);
  const std::uint64_t dflt = std::min<std::uint64_t>(50, o.digits / 4);
  const auto rep = digits::detect_period(s, o.S ? o.S : dflt, o.P ? o.P : std::max<std::uint64_t>(dflt, 1));
  r.data = json::parse(rep.json());
  return r;
}

Report digits_check(const DigitsOpts& o) {
  Report r;
  std::optional<Integer> c;
  if (!o.c.empty()) c = Rational::parse(o.c).num();
  const auto rep =
      digits::check_theorem2_conclusion(digits::Sequence::parse(o.f, o.base), o.base, o.n1, o.n2, c);
  r.data = json::parse(rep.json());
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    r.rows.push_back({{"n", o.n1 + i}, {"ratio", rep.ratios[i]}});
  }
  r.columns = {"n", "ratio"};
  return r;
}

// ---------------------------------------------------------------- relations

struct RelOpts {
  std::string constants = "1,e,S:3/2", lambdas, powers;
  unsigned digits = 100;
  std::string max_norm = "10000";
  std::uint64_t iter_cap = 100000;
};

Report run_relations(const std::vector<std::string>& specs, const RelOpts& o) {
  Report r;
  const auto rep =
      relations::independence_experiment(specs, o.digits, Rational::parse(o.max_norm).num(), nullptr, o.iter_cap);
  r.data = json::parse(rep.json());
  return r;
}

Report relations_pslq(const RelOpts& o) { return run_relations(split_list(o.constants), o); }

Report relations_independence(const RelOpts& o) {
  std::vector<std::string> specs;
  if (!o.lambdas.empty()) {
    specs = {"1", "e"};
    for (const auto& l : split_list(o.lambdas)) specs.push_back("S:" + l);
  } else if (!o.powers.empty()) {
    specs = {"1"};
    for (const auto& k : split_list(o.powers)) specs.push_back("prime:" + k);
  } else {
    specs = split_list(o.constants);
  }
  return run_relations(specs, o);
}

// ---------------------------------------------------------------- output

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return r.data.dump() + "\n";
  if (format == "csv") {
    json rows = r.rows;
    if (rows.empty()) rows.push_back(r.data);
    std::vector<std::string> cols = r.columns;
    if (cols.empty()) {
      for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
        if (!it.value().is_structured()) cols.push_back(it.key());
      }
    }
    return emit_plot_data(rows, cols);
  }
  if (!r.text.empty()) return r.text + "\n";
  std::string out;
  for (auto it = r.data.begin(); it != r.data.end(); ++it) {
    out += it.key() + ": " + cell(it.value()) + "\n";
  }
  return out;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& msg) {
  err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

}  // namespace

std::string emit_plot_data(const json& rows, const std::vector<std::string>& columns) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + quote(columns[i]);
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (!row.contains(columns[i])) throw PreconditionError("missing column '" + columns[i] + "'");
      out += (i ? "," : "") + quote(cell(row[columns[i]]));
    }
    out += "\r\n";
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments around the series sum [n^lambda]/n!, prime series and digit "
               "concatenations.",
               "irratlab"};
  app.require_subcommand(1);
  Context ctx;
  ctx.err = &err;
  app.add_option("--format", ctx.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--output", ctx.output, "write the report to this file");
  app.add_option("--seed", ctx.seed, "seed for randomized checks");
  app.add_option("--sieve-cache", ctx.sieve_cache, "sieve cache file (or IRRATLAB_SIEVE_CACHE)");

  std::function<Report()> job;
  auto leaf = [&](CLI::App* group, const char* name, const char* help, auto fn) {
    auto* sub = group->add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&job, fn] { job = fn; });
    return sub;
  };

  SeriesOpts so;
  auto* series = app.add_subcommand("series", "partial sums, tails and witnesses");
  series->require_subcommand(1);
  series->fallthrough();
  auto* s_eval = leaf(series, "eval", "exact partial sum with tail bound",
                      [&] { return series_eval(so, ctx); });
  s_eval->add_option("--lambda", so.lambda);
  s_eval->add_option("--n", so.n);
  s_eval->add_option("--bits", so.bits);
  s_eval->add_option("--digits", so.digits);
  s_eval->add_option("--prime-poly", so.prime_poly, "sum P(p_n)/n! instead");
  auto* s_tail = leaf(series, "tail", "tail bound past N", [&] { return series_tail(so); });
  s_tail->add_option("--lambda", so.lambda);
  s_tail->add_option("--n", so.n);
  s_tail->add_option("--digits", so.digits);
  auto* s_wit = leaf(series, "witness", "injectivity witness n0", [&] { return series_witness(so); });
  s_wit->add_option("--lambda1", so.lambda);
  s_wit->add_option("--lambda2", so.lambda2);
  auto* s_cov = leaf(series, "cover", "cover count", [&] { return series_cover(so); });
  s_cov->add_option("--t", so.t);
  s_cov->add_option("--n", so.n);

  PrimesOpts po;
  auto* primes = app.add_subcommand("primes", "sieve experiments");
  primes->require_subcommand(1);
  primes->fallthrough();
  leaf(primes, "nth", "n-th prime", [&] { return primes_nth(po, ctx); })->add_option("--n", po.n);
  auto* p_gaps = leaf(primes, "gaps", "prime gaps", [&] { return primes_gaps(po, ctx); });
  p_gaps->add_option("--start", po.start);
  p_gaps->add_option("--count", po.count);
  auto* p_con = leaf(primes, "constellation", "constellation counts in [x, 2x]",
                     [&] { return primes_constellation(po, ctx); });
  p_con->add_option("--x", po.x, "one or more x, comma separated");
  p_con->add_option("--offsets", po.offsets);
  p_con->add_option("--C", po.C);
  auto* p_li = leaf(primes, "li-inverse", "inverse logarithmic integral",
                    [&] { return primes_li_inverse(po); });
  p_li->add_option("--t", po.t);
  p_li->add_option("--to", po.t_to);
  p_li->add_option("--tol", po.tol);
  auto* p_gp = leaf(primes, "gap-poly", "nonvanishing rate of F on gap windows",
                    [&] { return primes_gap_poly(po, ctx); });
  p_gp->add_option("--poly", po.poly);
  p_gp->add_option("--start", po.start);
  p_gp->add_option("--count", po.count);

  EquiOpts eo;
  auto* equi = app.add_subcommand("equidist", "discrepancy and exponential sums");
  equi->require_subcommand(1);
  equi->fallthrough();
  auto phase_opts = [&](CLI::App* sub) {
    sub->add_option("--values", eo.values, "explicit values, folded mod 1");
    sub->add_option("--phase", eo.phase, "thm1, li or linear");
    sub->add_option("--a", eo.a);
    sub->add_option("--lambdas", eo.lambdas);
    sub->add_option("--M", eo.M);
    sub->add_option("--Q", eo.Q);
    sub->add_flag("--li-inverse", eo.li);
    sub->add_option("--alpha", eo.alpha);
    sub->add_option("--n1", eo.n1);
    sub->add_option("--n2", eo.n2);
  };
  phase_opts(leaf(equi, "disc", "exact star discrepancy", [&] { return equidist_disc(eo, ctx); }));
  auto* e_exp = leaf(equi, "expsum", "|sum e(h x_n)|", [&] { return equidist_expsum(eo, ctx); });
  phase_opts(e_exp);
  e_exp->add_option("--freq", eo.h, "frequency h");
  auto* e_et = leaf(equi, "et", "Erdos-Turan bound", [&] { return equidist_et(eo, ctx); });
  phase_opts(e_et);
  e_et->add_option("--H", eo.H);
  auto* e_weyl = leaf(equi, "weyl", "Weyl-van der Corput bound", [&] { return equidist_weyl(eo); });
  e_weyl->add_option("--N", eo.N);
  e_weyl->add_option("--lambda", eo.lambda);
  e_weyl->add_option("--alpha", eo.walpha);
  e_weyl->add_option("--q", eo.q);
  auto* e_thm1 = leaf(equi, "thm1", "discrepancy of the phase sequence",
                      [&] { return equidist_thm1(eo, ctx); });
  phase_opts(e_thm1);
  e_thm1->add_option("--sizes", eo.sizes, "prefix lengths for the sweep");
  auto* e_l6 = leaf(equi, "lemma6", "discrepancy of Q(p_n/n) for n in [x, 2x]",
                    [&] { return equidist_lemma6(eo, ctx); });
  e_l6->add_option("--Q", eo.Q);
  e_l6->add_option("--x", eo.xs, "one or more x, comma separated");
  e_l6->add_option("--H", eo.H);
  e_l6->add_option("--C", eo.C);
  e_l6->add_option("--c", eo.c);
  e_l6->add_flag("--li", eo.li, "also run with li^{-1}(n) in place of p_n");

  ElimOpts lo;
  auto* elim = app.add_subcommand("elim", "symbolic elimination");
  elim->require_subcommand(1);
  elim->fallthrough();
  auto* l_run = leaf(elim, "run", "eliminate down to the nu = mu diagonal",
                     [&] { return elim_run(lo, ctx); });
  l_run->add_option("--poly", lo.poly);
  l_run->add_option("--depth", lo.depth);
  l_run->add_flag("--trace", lo.trace);
  l_run->add_option("--check", lo.check, "n values for the consistency check");
  l_run->add_option("--budget", lo.budget);
  auto* l_l5 = leaf(elim, "lemma5", "nonvanishing of the shift combination",
                    [&] { return elim_lemma5(lo, ctx); });
  l_l5->add_option("--P", lo.P);
  l_l5->add_option("--Q", lo.Q);
  l_l5->add_option("--nu", lo.nu);
  l_l5->add_option("--trials", lo.trials);

  DigitsOpts dopt;
  auto* dig = app.add_subcommand("digits", "digit concatenations");
  dig->require_subcommand(1);
  dig->fallthrough();
  auto digit_opts = [&](CLI::App* sub) {
    sub->add_option("--f", dopt.f, "n, repunit, pow:A, poly:..., linrec:..., table:...");
    sub->add_option("--base", dopt.base);
  };
  auto* d_build = leaf(dig, "build", "digit stream", [&] { return digits_build(dopt); });
  digit_opts(d_build);
  d_build->add_option("--digits", dopt.digits);
  d_build->add_flag("--blocks", dopt.blocks);
  auto* d_det = leaf(dig, "detect", "eventual period", [&] { return digits_detect(dopt); });
  digit_opts(d_det);
  d_det->add_option("--digits", dopt.digits);
  d_det->add_option("--max-preperiod", dopt.S);
  d_det->add_option("--max-period", dopt.P);
  auto* d_chk = leaf(dig, "check", "ratio diagnostics", [&] { return digits_check(dopt); });
  digit_opts(d_chk);
  d_chk->add_option("--n1", dopt.n1);
  d_chk->add_option("--n2", dopt.n2);
  d_chk->add_option("--c", dopt.c);

  RelOpts ro;
  auto* rel = app.add_subcommand("relations", "integer relations");
  rel->require_subcommand(1);
  rel->fallthrough();
  auto rel_opts = [&](CLI::App* sub) {
    sub->add_option("--constants", ro.constants, "1, 3/7, e, S:<lambda>, prime:<k>, log:<q>");
    sub->add_option("--digits", ro.digits);
    sub->add_option("--max-norm", ro.max_norm);
    sub->add_option("--iter-cap", ro.iter_cap);
  };
  rel_opts(leaf(rel, "pslq", "PSLQ on the given constants", [&] { return relations_pslq(ro); }));
  auto* r_ind = leaf(rel, "independence", "1, e, S_lambda... or 1, S_0, S_1...",
                     [&] { return relations_independence(ro); });
  rel_opts(r_ind);
  r_ind->add_option("--lambdas", ro.lambdas, "tuple 1, e, S_l1, S_l2, ...");
  r_ind->add_option("--powers", ro.powers, "tuple 1, S_k1, S_k2, ... over primes");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    err << app.help();
    return 2;
  } catch (const PreconditionError& e) {
    error_line(err, "precondition", e.what());
    return 2;
  }
  if (!job) {
    error_line(err, "usage", "no command given");
    err << app.help();
    return 2;
  }
  try {
    const Report r = job();
    const std::string text = render(r, ctx.format.empty() ? r.default_format : ctx.format);
    if (ctx.output.empty()) {
      out << text;
    } else {
      std::ofstream f(ctx.output, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + ctx.output);
      f << text;
    }
    return 0;
  } catch (const PreconditionError& e) {
    error_line(err, "precondition", e.what());
    return 2;
  } catch (const CapacityError& e) {
    error_line(err, "capacity", e.what());
  } catch (const PrecisionError& e) {
    error_line(err, "precision", e.what());
  } catch (const ConvergenceError& e) {
    error_line(err, "convergence", e.what());
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
  }
  return 1;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace irratlab::cli
