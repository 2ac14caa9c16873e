#include "irratlab/polyelim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "irratlab/primes.hpp"

namespace irratlab::polyelim {

namespace {

void trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

Exponents add_exponents(const Exponents& a, const Exponents& b) {
  Exponents r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mod(const Integer& z, std::uint64_t p) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), Integer(std::to_string(p)).get_mpz_t());
  return std::stoull(r.get_str());
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::string pair_key(const Pair& p) {
  return "(" + std::to_string(p.nu) + "," + std::to_string(p.mu) + ")";
}

}  // namespace

// ---------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::constant(const Rational& c) {
  MultiPoly p;
  p.add_term({}, c);
  return p;
}

MultiPoly MultiPoly::variable(unsigned index, unsigned power, const Rational& c) {
  if (index == 0) throw PreconditionError("gap variables are numbered from 1");
  Exponents e(index, 0);
  e[index - 1] = power;
  MultiPoly p;
  p.add_term(std::move(e), c);
  return p;
}

void MultiPoly::add_term(Exponents e, const Rational& c) {
  if (c.is_zero()) return;
  trim(e);
  auto [it, inserted] = terms_.try_emplace(std::move(e), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

unsigned MultiPoly::window() const {
  std::size_t w = 0;
  for (const auto& [e, c] : terms_) w = std::max(w, e.size());
  return static_cast<unsigned>(w);
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (unsigned x : e) s += static_cast<int>(x);
    d = std::max(d, s);
  }
  return d;
}

Rational MultiPoly::coefficient(const Exponents& e) const {
  Exponents k = e;
  trim(k);
  auto it = terms_.find(k);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool MultiPoly::has_integer_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.is_integer(); });
}

Integer MultiPoly::denominator_lcm() const {
  Integer l = 1;
  for (const auto& [e, c] : terms_) {
    const Integer d = c.den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

MultiPoly MultiPoly::shifted(unsigned by) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    if (e.empty()) {
      r.terms_.emplace(e, c);
      continue;
    }
    Exponents s(by, 0);
    s.insert(s.end(), e.begin(), e.end());
    r.terms_.emplace(std::move(s), c);
  }
  return r;
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    bool zero = false;
    for (std::size_t i = 0; i < e.size() && !zero; ++i) {
      if (e[i] == 0) continue;
      if (i >= point.size()) {
        zero = true;
        break;
      }
      mpq_class pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get().get_num_mpz_t(), e[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get().get_den_mpz_t(), e[i]);
      term *= Rational(pw);
    }
    if (!zero) sum += term;
  }
  return sum;
}

Integer MultiPoly::evaluate_integer(std::span<const std::uint64_t> point) const {
  Integer sum = 0;
  for (const auto& [e, c] : terms_) {
    if (!c.is_integer()) throw PreconditionError("evaluate_integer needs integer coefficients");
    Integer term = c.num();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (i >= point.size()) {
        term = 0;
        break;
      }
      term *= ipow(Integer(static_cast<unsigned long>(point[i])), e[i]);
    }
    sum += term;
  }
  return sum;
}

std::optional<std::uint64_t> MultiPoly::evaluate_mod(std::span<const std::uint64_t> point,
                                                     std::uint64_t p) const {
  std::uint64_t sum = 0;
  for (const auto& [e, c] : terms_) {
    const std::uint64_t den = reduce_mod(c.den(), p);
    if (den == 0) return std::nullopt;
    std::uint64_t term = mulmod(reduce_mod(c.num(), p), powmod(den, p - 2, p), p);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      const std::uint64_t x = i < point.size() ? point[i] % p : 0;
      term = mulmod(term, powmod(x, e[i], p), p);
    }
    sum = (sum + term) % p;
  }
  return sum;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const Rational a = c.abs();
    out += out.empty() ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
    const std::string coeff = a.is_integer() ? a.num().get_str() : a.str();
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "X" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += coeff;
    } else if (a == Rational(1)) {
      out += mono;
    } else {
      out += coeff + "*" + mono;
    }
  }
  return out;
}

std::string MultiPoly::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MultiPoly MultiPoly::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw PreconditionError("empty polynomial");
  const auto bad = [&] { return PreconditionError("malformed polynomial '" + std::string(text) + "'"); };
  MultiPoly result;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw bad();
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    const std::string term = s.substr(i, j - i);
    if (term.empty()) throw bad();
    i = j;
    Rational coeff(sign);
    Exponents e;
    std::stringstream ss(term);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor.empty()) throw bad();
      if (factor[0] == 'X' || factor[0] == 'x') {
        std::size_t k = 1;
        while (k < factor.size() && std::isdigit(static_cast<unsigned char>(factor[k]))) ++k;
        if (k == 1) throw bad();
        const unsigned idx = static_cast<unsigned>(std::stoul(factor.substr(1, k - 1)));
        unsigned pw = 1;
        if (k < factor.size()) {
          if (factor[k] != '^' || k + 1 == factor.size()) throw bad();
          const std::string ps = factor.substr(k + 1);
          if (!std::all_of(ps.begin(), ps.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw bad();
          }
          pw = static_cast<unsigned>(std::stoul(ps));
        }
        if (idx == 0) throw bad();
        if (e.size() < idx) e.resize(idx, 0);
        e[idx - 1] += pw;
      } else {
        coeff *= Rational::parse(factor);
      }
    }
    result.add_term(std::move(e), coeff);
  }
  return result;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) r.add_term(add_exponents(ea, eb), ca * cb);
  }
  return r;
}

// ---------------------------------------------------------------- PairTable

bool succeeds(const Pair& a, const Pair& b) {
  const int da = a.nu - a.mu, db = b.nu - b.mu;
  return da > db || (da == db && a.nu > b.nu);
}

unsigned PairTable::window() const {
  unsigned w = 0;
  for (const auto& [p, c] : entries_) w = std::max(w, c.window());
  return w;
}

void PairTable::add(const Pair& pair, const MultiPoly& c) {
  if (c.is_zero()) return;
  if (pair.nu - pair.mu < threshold_) {
    // p_n^nu / n^mu << log^nu n / n here, and each gap is << log^2 n.
    raise_log_power(pair.nu + 2 * std::max(c.total_degree(), 0));
    return;
  }
  auto [it, inserted] = entries_.try_emplace(pair, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

const MultiPoly* PairTable::find(const Pair& pair) const {
  auto it = entries_.find(pair);
  return it == entries_.end() ? nullptr : &it->second;
}

Pair PairTable::max_pair() const {
  if (entries_.empty()) throw PreconditionError("pair table is empty");
  Pair best = entries_.begin()->first;
  for (const auto& [p, c] : entries_) {
    if (succeeds(p, best)) best = p;
  }
  return best;
}

bool PairTable::reduced() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return e.first.nu == e.first.mu; });
}

Rational PairTable::evaluate(std::int64_t n, std::int64_t p_n,
                             std::span<const std::uint64_t> gaps) const {
  if (gaps.size() < window()) throw PreconditionError("not enough gaps to evaluate the table");
  std::vector<Rational> point;
  point.reserve(gaps.size());
  for (auto g : gaps) point.emplace_back(Integer(static_cast<unsigned long>(g)));
  Rational sum(0);
  for (const auto& [pair, c] : entries_) {
    const Rational mono(ipow(Integer(static_cast<long>(p_n)), static_cast<unsigned long>(pair.nu)),
                        ipow(Integer(static_cast<long>(n)), static_cast<unsigned long>(pair.mu)));
    sum += c.evaluate(point) * mono;
  }
  return sum;
}

// ---------------------------------------------------------------- engine

namespace {

// Coefficients of 1 / prod_{i=1}^{j} (1 + i/n) as a series in 1/n, up to r <= rmax.
std::vector<Integer> laurent_coefficients(unsigned j, int rmax) {
  std::vector<Integer> series(static_cast<std::size_t>(std::max(rmax, 0)) + 1, Integer(0));
  series[0] = 1;
  for (unsigned i = 1; i <= j; ++i) {
    // multiply by sum_r (-i)^r n^-r
    std::vector<Integer> next(series.size(), Integer(0));
    for (std::size_t a = 0; a < series.size(); ++a) {
      Integer factor = 1;
      for (std::size_t b = 0; a + b < series.size(); ++b) {
        next[a + b] += series[a] * factor;
        factor *= -static_cast<long>(i);
      }
    }
    series = std::move(next);
  }
  return series;
}

}  // namespace

PairTable initial_table(const IntPolynomial& P, unsigned depth, int threshold) {
  if (P.is_zero()) throw PreconditionError("initial_table: P vanishes identically");
  if (depth == 0) throw PreconditionError("initial_table: truncation depth must be >= 1");
  PairTable table(threshold);
  const int d = P.degree();
  MultiPoly s;  // X_1 + ... + X_j
  for (unsigned j = 1; j <= depth; ++j) {
    s += MultiPoly::variable(j);
    // Keep t - j - r >= threshold; one extra order so the R(n) budget sees it.
    const int rmax = d - static_cast<int>(j) - threshold + 1;
    const auto lc = laurent_coefficients(j, rmax);
    std::vector<MultiPoly> s_pow{MultiPoly::constant(1)};
    for (int k = 1; k <= d; ++k) s_pow.push_back(s_pow.back() * s);
    for (int e = 0; e <= d; ++e) {
      const Integer& a = P.coeffs()[static_cast<std::size_t>(e)];
      if (sgn(a) == 0) continue;
      for (int t = 0; t <= e; ++t) {
        const MultiPoly base =
            s_pow[static_cast<std::size_t>(e - t)] *
            Rational(Integer(a * binomial(static_cast<unsigned long>(e), static_cast<unsigned long>(t))));
        for (std::size_t r = 0; r < lc.size(); ++r) {
          if (sgn(lc[r]) == 0) continue;
          table.add(Pair{t, static_cast<int>(j + r)}, base * Rational(lc[r]));
        }
      }
    }
  }
  return table;
}

MultiPoly predicted_subleading(const PairTable& table) {
  const Pair top = table.max_pair();
  const MultiPoly& A = *table.find(top);
  const MultiPoly sA = A.shifted();
  const MultiPoly* Bp = table.find(Pair{top.nu - 1, top.mu});
  const MultiPoly B = Bp ? *Bp : MultiPoly();
  return A * sA * MultiPoly::variable(1) * Rational(-top.nu) + sA * B - A * B.shifted();
}

PairTable eliminate_step(const PairTable& table, StepRecord* record) {
  const Pair top = table.max_pair();
  if (top.nu == 0 || top.nu - top.mu <= table.threshold()) {
    throw PreconditionError("table already reduced");
  }
  const MultiPoly& A = *table.find(top);
  const MultiPoly sA = A.shifted();

  PairTable next(table.threshold());
  // R(n) of F(n) and F(n+1) is multiplied by gap polynomials of degree deg A.
  next.raise_log_power(table.log_power() + 2 * std::max(A.total_degree(), 0));

  // shift(A) * F(n)
  for (const auto& [pair, c] : table.entries()) next.add(pair, sA * c);

  // - A * F(n+1), with p_{n+1} = p_n + X_1 and 1/(n+1)^mu expanded in 1/n.
  const MultiPoly x1 = MultiPoly::variable(1);
  for (const auto& [pair, c] : table.entries()) {
    const MultiPoly base = A * c.shifted();
    MultiPoly x1_pow = MultiPoly::constant(1);
    for (int t = pair.nu; t >= 0; --t) {
      // coefficient C(nu, t) X_1^(nu - t) p_n^t
      const MultiPoly with_x = base * x1_pow *
                               Rational(binomial(static_cast<unsigned long>(pair.nu),
                                                 static_cast<unsigned long>(t)));
      const int rmax = t - pair.mu - table.threshold() + 1;
      for (int r = 0; r <= std::max(rmax, 0); ++r) {
        Integer lc = binomial(static_cast<unsigned long>(pair.mu + r - 1),
                              static_cast<unsigned long>(r));
        if (r % 2 == 1) lc = -lc;
        next.add(Pair{t, pair.mu + r}, with_x * Rational(Integer(-lc)));
      }
      x1_pow = x1_pow * x1;
    }
  }

  if (next.find(top) != nullptr) throw std::logic_error("eliminated pair survived the step");

  if (record) {
    record->eliminated = top;
    record->pivot = A;
    record->size_before = table.entries().size();
    record->size_after = next.entries().size();
    record->max_diff_before = top.nu - top.mu;
    record->created.clear();
    record->digests.clear();
    for (const auto& [pair, c] : next.entries()) {
      if (table.find(pair) == nullptr) record->created.push_back(pair);
      record->digests[pair] = c.digest();
    }
  }
  return next;
}

EliminationRun run_elimination(const IntPolynomial& P, unsigned depth, std::size_t max_steps) {
  if (P.degree() < 1) throw PreconditionError("run_elimination needs a nonconstant polynomial");
  EliminationRun run;
  run.input = P;
  run.depth = depth;
  run.initial = initial_table(P, depth, 0);
  run.tables.push_back(run.initial);
  if (run.initial.empty()) {
    throw std::runtime_error("initial table is empty: every term of F^(0) is negligible");
  }
  while (!run.tables.back().reduced()) {
    if (run.steps.size() >= max_steps) {
      throw std::runtime_error("elimination exceeded " + std::to_string(max_steps) + " steps");
    }
    StepRecord rec;
    PairTable next = eliminate_step(run.tables.back(), &rec);
    run.steps.push_back(std::move(rec));
    run.tables.push_back(std::move(next));
    if (run.tables.back().empty()) {
      throw std::runtime_error("all pairs cancelled before reaching reduced form; trace: " +
                               trace_json(run));
    }
    const Pair before = run.steps.back().eliminated;
    const Pair after = run.tables.back().max_pair();
    if (!succeeds(before, after)) throw std::logic_error("pair order did not decrease");
  }
  const PairTable& last = run.tables.back();
  Integer scale = 1;
  int top = 0;
  for (const auto& [pair, c] : last.entries()) {
    const Integer d = c.denominator_lcm();
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), d.get_mpz_t());
    top = std::max(top, pair.nu);
  }
  run.relation.scale = scale;
  run.relation.q.assign(static_cast<std::size_t>(top), MultiPoly());
  for (const auto& [pair, c] : last.entries()) {
    run.relation.q[static_cast<std::size_t>(pair.nu - 1)] = c * Rational(scale);
  }
  run.relation.window = last.window();
  return run;
}

std::string trace_json(const EliminationRun& run) {
  using nlohmann::json;
  json steps = json::array();
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& s = run.steps[i];
    json created = json::array();
    for (const auto& p : s.created) created.push_back({p.nu, p.mu});
    json digests = json::object();
    for (const auto& [p, d] : s.digests) digests[pair_key(p)] = d;
    steps.push_back({{"index", i},
                     {"eliminated", {s.eliminated.nu, s.eliminated.mu}},
                     {"pivot", s.pivot.str()},
                     {"size_before", s.size_before},
                     {"size_after", s.size_after},
                     {"created", created},
                     {"digests", digests}});
  }
  json relation = json::array();
  for (std::size_t i = 0; i < run.relation.q.size(); ++i) {
    relation.push_back({{"i", i + 1}, {"Q", run.relation.q[i].str()}});
  }
  json tables = json::array();
  for (const auto& t : run.tables) {
    json entries = json::object();
    for (const auto& [p, c] : t.entries()) entries[pair_key(p)] = c.str();
    tables.push_back({{"entries", entries}, {"log_power", t.log_power()}});
  }
  json out = {{"input", run.input.str()},
              {"depth", run.depth},
              {"steps", steps},
              {"tables", tables},
              {"relation", relation},
              {"scale", run.relation.scale.get_str()},
              {"window", run.relation.window}};
  return out.dump();
}

std::vector<ConsistencyPoint> semantic_consistency(const EliminationRun& run,
                                                   const primes::PrimeTable& table,
                                                   std::span<const std::int64_t> ns,
                                                   double budget_constant) {
  std::vector<ConsistencyPoint> out;
  unsigned window = run.depth;
  for (const auto& t : run.tables) window = std::max(window, t.window());
  for (const auto& s : run.steps) window = std::max(window, s.pivot.window());
  const std::size_t stages = run.tables.size();
  const std::size_t span = window + stages + 2;

  for (std::int64_t n : ns) {
    if (n < 1) throw PreconditionError("consistency check needs n >= 1");
    table.nth_prime(static_cast<std::uint64_t>(n) + span + 1);  // capacity
    const auto ps = table.primes();
    auto p = [&](std::int64_t k) { return ps[static_cast<std::size_t>(k - 1)]; };
    auto gaps_from = [&](std::int64_t k) {
      std::vector<Rational> g;
      for (std::size_t i = 0; i < span; ++i) {
        g.emplace_back(Integer(static_cast<unsigned long>(p(k + 1 + i) - p(k + i))));
      }
      return g;
    };

    std::map<std::pair<std::size_t, std::int64_t>, Rational> memo;
    std::function<Rational(std::size_t, std::int64_t)> F = [&](std::size_t i,
                                                               std::int64_t m) -> Rational {
      if (auto it = memo.find({i, m}); it != memo.end()) return it->second;
      Rational v(0);
      if (i == 0) {
        Integer denom = 1;
        for (unsigned j = 1; j <= run.depth; ++j) {
          denom *= Integer(static_cast<long>(m + j));
          v += Rational(run.input(Integer(static_cast<unsigned long>(p(m + j)))), denom);
        }
      } else {
        const MultiPoly& A = run.steps[i - 1].pivot;
        const auto g0 = gaps_from(m);
        const auto g1 = gaps_from(m + 1);
        v = A.evaluate(g1) * F(i - 1, m) - A.evaluate(g0) * F(i - 1, m + 1);
      }
      memo.emplace(std::pair{i, m}, v);
      return v;
    };

    std::vector<std::uint64_t> g;
    for (std::size_t i = 0; i < span; ++i) g.push_back(p(n + 1 + i) - p(n + i));
    for (std::size_t i = 0; i < stages; ++i) {
      ConsistencyPoint pt;
      pt.n = n;
      pt.stage = i;
      pt.table_value = run.tables[i].evaluate(n, static_cast<std::int64_t>(p(n)), g);
      pt.recursion_value = F(i, n);
      pt.abs_diff = (pt.table_value - pt.recursion_value).abs().to_double();
      pt.log_power = run.tables[i].log_power();
      const double ln = std::log(static_cast<double>(n));
      pt.budget = budget_constant * std::pow(ln, pt.log_power) / static_cast<double>(n);
      pt.ok = pt.abs_diff <= pt.budget;
      out.push_back(std::move(pt));
    }
  }
  return out;
}

MultiPoly lemma5_combination(const MultiPoly& P, const MultiPoly& Q, long nu) {
  if (nu == 0) throw PreconditionError("lemma5 needs nu != 0");
  return MultiPoly::variable(1) * P * Rational(nu) + P * Q.shifted() - P.shifted() * Q;
}

Lemma5Verdict lemma5_test(const MultiPoly& P, const MultiPoly& Q, long nu, std::uint64_t seed,
                          int trials) {
  Lemma5Verdict v;
  v.combination = lemma5_combination(P, Q, nu);
  v.vanishes = v.combination.is_zero();
  const unsigned m = std::max({P.window(), Q.window(), 1u}) + 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> coord(0, kIdentityTestPrime - 1);
  v.random_says_zero = true;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::uint64_t> point(m);
    for (auto& x : point) x = coord(rng);
    const auto val = v.combination.evaluate_mod(point, kIdentityTestPrime);
    if (val && *val != 0) {
      v.random_says_zero = false;
      v.witness = point;
      break;
    }
  }
  return v;
}

}  // namespace irratlab::polyelim
