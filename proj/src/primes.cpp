#include "irratlab/primes.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <string>

#include "irratlab/polyelim.hpp"

namespace irratlab::primes {

namespace {

constexpr std::array<char, 4> kMagic = {'I', 'R', 'S', 'V'};
constexpr std::uint32_t kCacheVersion = 1;

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

bool get_le(std::istream& is, std::uint64_t& v, int bytes) {
  v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) return false;
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return true;
}

bool small_is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::size_t segment_size) : limit_(limit) {
  if (segment_size == 0) throw PreconditionError("segment size must be positive");
  bits_.assign(limit / 64 + 1, ~std::uint64_t{0});
  auto clear = [this](std::uint64_t n) { bits_[n >> 6] &= ~(std::uint64_t{1} << (n & 63)); };
  clear(0);
  if (limit >= 1) clear(1);
  // Bits above the limit are never read but keep the cache canonical.
  for (std::uint64_t n = limit + 1; n < bits_.size() * 64; ++n) clear(n);

  // Base primes up to sqrt(limit) with a plain sieve.
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  for (std::uint64_t lo = 0; lo <= limit; lo += segment_size) {
    const std::uint64_t hi = std::min<std::uint64_t>(limit, lo + segment_size - 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) clear(m);
    }
  }
  index();
}

void PrimeTable::index() {
  primes_.clear();
  for (std::uint64_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      const int b = __builtin_ctzll(word);
      const std::uint64_t n = w * 64 + static_cast<std::uint64_t>(b);
      if (n <= limit_) primes_.push_back(n);
      word &= word - 1;
    }
  }
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write sieve cache " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put_le(os, kCacheVersion, 4);
  put_le(os, limit_, 8);
  put_le(os, bits_.size(), 8);
  for (std::uint64_t w : bits_) put_le(os, w, 8);
}

std::optional<PrimeTable> PrimeTable::load(const std::filesystem::path& path, std::uint64_t limit) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) return std::nullopt;
  std::uint64_t version = 0, stored_limit = 0, nwords = 0;
  if (!get_le(is, version, 4) || version != kCacheVersion) return std::nullopt;
  if (!get_le(is, stored_limit, 8) || stored_limit != limit) return std::nullopt;
  if (!get_le(is, nwords, 8) || nwords != limit / 64 + 1) return std::nullopt;
  PrimeTable t;
  t.limit_ = limit;
  t.bits_.resize(nwords);
  for (auto& w : t.bits_) {
    if (!get_le(is, w, 8)) return std::nullopt;
  }
  if (is.peek() != EOF) return std::nullopt;
  t.index();
  return t;
}

std::optional<PrimeTable> PrimeTable::load_at_least(const std::filesystem::path& path,
                                                    std::uint64_t limit) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::array<char, 4> magic{};
  std::uint64_t version = 0, stored_limit = 0;
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) return std::nullopt;
  if (!get_le(is, version, 4) || !get_le(is, stored_limit, 8)) return std::nullopt;
  if (stored_limit < limit) return std::nullopt;
  is.close();
  return load(path, stored_limit);
}

PrimeTable PrimeTable::cached(const std::filesystem::path& path, std::uint64_t limit) {
  if (auto t = load_at_least(path, limit)) return *std::move(t);
  PrimeTable t(limit);
  // Write a private file (exclusive create), then rename over the cache so
  // readers only ever see a complete table.
  auto tmp = path;
  tmp += "." + std::to_string(::getpid()) + ".tmp";
  if (std::FILE* f = std::fopen(tmp.c_str(), "wbx")) {
    std::fclose(f);
    try {
      t.save(tmp);
      std::filesystem::rename(tmp, path);
    } catch (const std::exception&) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
    }
  }
  return t;
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) {
    throw CapacityError("primality of " + std::to_string(n) + " needs sieve limit >= " +
                        std::to_string(n));
  }
  return (bits_[n >> 6] >> (n & 63)) & 1;
}

std::uint64_t limit_for_index(std::uint64_t n) {
  if (n < 6) return 13;
  const double x = static_cast<double>(n);
  return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 16;
}

std::uint64_t PrimeTable::nth_prime(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("prime index must be >= 1");
  if (n > primes_.size()) {
    throw CapacityError("p_" + std::to_string(n) + " needs sieve limit >= " +
                        std::to_string(limit_for_index(n)) + " (table limit " +
                        std::to_string(limit_) + ")");
  }
  return primes_[n - 1];
}

std::uint64_t PrimeTable::pi(std::uint64_t x) const {
  if (x > limit_) {
    throw CapacityError("pi(" + std::to_string(x) + ") needs sieve limit >= " + std::to_string(x));
  }
  return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) -
                                    primes_.begin());
}

GapSequence gaps(const PrimeTable& table, std::uint64_t n, std::uint64_t count) {
  if (n == 0) throw PreconditionError("gap index must be >= 1");
  GapSequence g;
  g.start = n;
  if (count == 0) return g;
  table.nth_prime(n + count);  // capacity check
  const auto ps = table.primes();
  g.gaps.reserve(count);
  for (std::uint64_t i = n; i < n + count; ++i) g.gaps.push_back(ps[i] - ps[i - 1]);
  return g;
}

OffsetTuple::OffsetTuple(std::vector<std::uint64_t> offsets) : a_(std::move(offsets)) {
  if (a_.empty()) throw PreconditionError("offset tuple must be nonempty");
  for (std::size_t i = 1; i < a_.size(); ++i) {
    if (a_[i] <= a_[i - 1]) throw PreconditionError("offsets must be strictly increasing");
  }
}

std::uint64_t nu(std::uint64_t p, const OffsetTuple& offsets) {
  if (!small_is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  std::set<std::uint64_t> residues{0};
  for (auto a : offsets.values()) residues.insert(a % p);
  return residues.size();
}

std::uint64_t constellation_count(const PrimeTable& table, std::uint64_t x,
                                  const OffsetTuple& offsets) {
  const std::uint64_t need = 2 * x + offsets.max();
  if (need > table.limit()) {
    throw CapacityError("constellation count needs sieve limit >= " + std::to_string(need));
  }
  std::uint64_t count = 0;
  for (std::uint64_t n = x; n <= 2 * x; ++n) {
    bool all = true;
    for (auto a : offsets.values()) {
      if (!table.is_prime(n + a)) { all = false; break; }
    }
    count += all;
  }
  return count;
}

double selberg_rhs(double x, int k, double C) {
  if (!(x >= 16)) throw PreconditionError("selberg_rhs needs x >= 16");
  if (k < 0) throw PreconditionError("selberg_rhs needs k >= 0");
  const double lx = std::log(x);
  return C * x * std::pow(std::log(lx), k + 2) / std::pow(lx, k + 1);
}

namespace {

polyelim::MultiPoly integral_form(const polyelim::MultiPoly& F) {
  if (F.is_zero()) throw PreconditionError("gap polynomial vanishes identically");
  return F * Rational(F.denominator_lcm());
}

}  // namespace

GapPolyReport gap_poly_experiment(const PrimeTable& table, const polyelim::MultiPoly& F,
                                  std::uint64_t n_start, std::uint64_t n_count) {
  const polyelim::MultiPoly G = integral_form(F);
  if (n_start == 0) throw PreconditionError("gap index must be >= 1");
  const std::uint64_t m = G.window();
  GapPolyReport r;
  r.total = n_count;
  if (n_count == 0) throw PreconditionError("empty window");
  table.nth_prime(n_start + n_count - 1 + m);  // capacity check
  const double x = static_cast<double>(n_start + n_count);
  r.gap_cap = std::log(x) * std::log(std::log(x));
  const auto ps = table.primes();
  std::vector<std::uint64_t> window(m);
  for (std::uint64_t n = n_start; n < n_start + n_count; ++n) {
    bool small = true;
    for (std::uint64_t i = 0; i < m; ++i) {
      window[i] = ps[n + i] - ps[n + i - 1];
      if (static_cast<double>(window[i]) > r.gap_cap) small = false;
    }
    const bool nz = sgn(G.evaluate_integer(window)) != 0;
    r.nonzero += nz;
    if (small) {
      ++r.kept;
      r.kept_nonzero += nz;
    } else {
      ++r.discarded;
    }
  }
  r.rate = Rational(Integer(static_cast<unsigned long>(r.nonzero)),
                    Integer(static_cast<unsigned long>(r.total)));
  return r;
}

Rational gap_poly_nonvanish_rate(const PrimeTable& table, const polyelim::MultiPoly& F,
                                 std::uint64_t n_start, std::uint64_t n_count) {
  return gap_poly_experiment(table, F, n_start, n_count).rate;
}

// ---------------------------------------------------------------- li

namespace {

double inv_log(double t) { return 1.0 / std::log(t); }

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = inv_log(lm), frm = inv_log(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    err += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive(a, m, fa, flm, fm, left, tol / 2, depth - 1, err) +
         adaptive(m, b, fm, frm, fb, right, tol / 2, depth - 1, err);
}

}  // namespace

double li_between(double a, double b, double tol, double* err) {
  if (!(a >= 2) || !(b >= 2)) throw PreconditionError("li integrates over [2, inf) only");
  if (a == b) {
    if (err) *err = 0;
    return 0;
  }
  if (a > b) return -li_between(b, a, tol, err);
  // Split into pieces so the initial Simpson estimate is not wildly off.
  double total = 0, e = 0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, std::max(lo * 2, lo + 1));
    const double fa = inv_log(lo), fb = inv_log(hi), fm = inv_log(0.5 * (lo + hi));
    total += adaptive(lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol * (hi - lo) / (b - a),
                      48, e);
    lo = hi;
  }
  if (err) *err = e;
  return total;
}

double li(double x, double tol, double* err) { return li_between(2.0, x, tol, err); }

namespace {

// Newton on y -> anchor_value + integral_{anchor}^{y} - t, where anchor_value
// is li(anchor) up to anchor_err. `li_value`/`li_err` receive the final
// evaluation so callers can re-anchor.
LiInverse newton_from(double t, double anchor, double anchor_value, double anchor_err, double y,
                      double tol, int max_iter, double* li_value = nullptr,
                      double* li_err = nullptr) {
  LiInverse r;
  for (int it = 1; it <= max_iter; ++it) {
    double qerr = 0;
    const double val = anchor_value + li_between(anchor, y, tol / 100, &qerr);
    const double f = val - t;
    r.iterations = it;
    r.value = y;
    r.residual = std::fabs(f) + qerr + anchor_err;
    if (li_value) *li_value = val;
    if (li_err) *li_err = qerr + anchor_err;
    if (r.residual <= tol) return r;
    double next = y - f * std::log(y);
    if (next < 2) next = 0.5 * (y + 2);
    if (next == y) break;  // stalled at double resolution
    y = next;
  }
  throw ConvergenceError("li_inverse(" + std::to_string(t) + ") did not converge to tol " +
                         std::to_string(tol));
}

}  // namespace

LiInverse li_inverse(double t, double tol, int max_iter) {
  if (!(t >= 2)) throw PreconditionError("li_inverse needs t >= 2");
  if (!(tol > 0)) throw PreconditionError("li_inverse needs tol > 0");
  return newton_from(t, 2.0, 0.0, 0.0, std::max(2.0, t * std::log(t)), tol, max_iter);
}

std::vector<LiInverse> li_inverse_run(std::int64_t first, std::int64_t last, double tol) {
  if (first < 2 || last < first) throw PreconditionError("li_inverse_run needs 2 <= first <= last");
  if (!(tol > 0)) throw PreconditionError("li_inverse needs tol > 0");
  constexpr std::int64_t kReanchorEvery = 1024;
  std::vector<LiInverse> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  double anchor = 2.0, anchor_value = 0.0, anchor_err = 0.0;
  double guess = std::max(2.0, static_cast<double>(first) * std::log(static_cast<double>(first)));
  for (std::int64_t t = first; t <= last; ++t) {
    if ((t - first) % kReanchorEvery == 0) {
      // Fresh integral from 2 so quadrature error does not accumulate.
      anchor = 2.0;
      anchor_value = 0.0;
      anchor_err = 0.0;
    }
    double val = 0, err = 0;
    LiInverse r = newton_from(static_cast<double>(t), anchor, anchor_value, anchor_err, guess,
                              tol, 100, &val, &err);
    out.push_back(r);
    anchor = r.value;
    anchor_value = val;
    anchor_err = err;
    guess = r.value + std::log(r.value);
  }
  return out;
}

}  // namespace irratlab::primes
