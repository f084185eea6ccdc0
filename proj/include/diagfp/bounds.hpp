#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diagfp/error.hpp"

namespace diagfp {

/// Certified upper bound of the form 2^2^...^top with `level` exponentiations
/// (level 0: the value itself is <= top). All operations round upward.
struct Tower {
  int level = 0;
  double top = 0.0;

  friend bool operator==(const Tower&, const Tower&) = default;
};

namespace detail {

inline constexpr double kTowerRaise = 1e300;
inline constexpr double kTowerLower = 990.0;  // 2^990 < 1e300, so lowering never re-raises

inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline Tower normalize(Tower t) {
  while (t.level > 0 && t.top < kTowerLower) {
    t.top = up(std::exp2(t.top));
    --t.level;
  }
  while (t.top > kTowerRaise) {
    t.top = up(std::log2(t.top));
    ++t.level;
  }
  return t;
}

inline Tower tower_log2(const Tower& t) {
  if (t.level == 0) return {0, t.top <= 1.0 ? 0.0 : up(std::log2(t.top))};
  return normalize({t.level - 1, t.top});
}

inline Tower tower_exp2(const Tower& t) { return normalize({t.level + 1, t.top}); }

// Both operands raised to a common level (raising keeps an upper bound).
inline std::pair<Tower, Tower> align(Tower a, Tower b) {
  while (a.level < b.level) a = {a.level + 1, a.top <= 1.0 ? 0.0 : up(std::log2(a.top))};
  while (b.level < a.level) b = {b.level + 1, b.top <= 1.0 ? 0.0 : up(std::log2(b.top))};
  return {a, b};
}

inline Tower tower_max(const Tower& a, const Tower& b) {
  auto [x, y] = align(a, b);
  return x.top >= y.top ? x : y;
}

inline Tower tower_add(const Tower& a, const Tower& b) {
  if (a.level == 0 && b.level == 0) return normalize({0, up(a.top + b.top)});
  // a + b <= 2 max(a, b)
  return tower_exp2(tower_add(tower_log2(tower_max(a, b)), Tower{0, 1.0}));
}

inline Tower tower_mul(const Tower& a, const Tower& b) {
  if (a.level == 0 && a.top <= 1.0) return b;  // a <= 1 and b >= 0
  if (b.level == 0 && b.top <= 1.0) return a;
  if (a.level == 0 && b.level == 0 && a.top * b.top <= kTowerRaise) return {0, up(a.top * b.top)};
  return tower_exp2(tower_add(tower_log2(a), tower_log2(b)));
}

inline Tower tower_pow(const Tower& base, const Tower& e) {
  if (base.level == 0 && base.top <= 1.0) return {0, 1.0};
  return tower_exp2(tower_mul(e, tower_log2(base)));
}

// Upper bound on log2 of a positive integer.
inline double log2_upper(const mpz_class& v) {
  if (v <= 0) return 0.0;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());  // v = mant * 2^exp, mant in [0.5, 1), truncated
  return up(static_cast<double>(exp) + std::log2(up(mant)));
}

inline Tower tower_of(const mpz_class& v) {
  if (v <= 0) return {0, 0.0};
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 990) return {0, up(v.get_d())};
  return normalize({1, log2_upper(v)});
}

}  // namespace detail

/// Exact nonnegative integer when affordable, always with a certified tower
/// upper bound.
class BoundValue {
 public:
  BoundValue() : BoundValue(mpz_class(0)) {}
  BoundValue(const mpz_class& v) : exact_(v), upper_(detail::tower_of(v)) {}  // NOLINT: implicit by design
  BoundValue(std::uint64_t v) : BoundValue(mpz_class(static_cast<unsigned long>(v))) {}  // NOLINT
  static BoundValue bounded(Tower t) {
    BoundValue b;
    b.exact_.reset();
    b.upper_ = t;
    return b;
  }

  bool is_exact() const noexcept { return exact_.has_value(); }
  const mpz_class& exact() const {
    if (!exact_) fail(ErrorCode::BitBudget, "value is only known as an upper bound");
    return *exact_;
  }
  const Tower& upper() const noexcept { return upper_; }

  /// Upper bound on log2 of the value; +inf when it exceeds double range.
  double log2_upper() const {
    if (exact_) return detail::log2_upper(*exact_);
    if (upper_.level == 0) return upper_.top <= 1.0 ? 0.0 : detail::up(std::log2(upper_.top));
    if (upper_.level == 1) return upper_.top;
    return std::numeric_limits<double>::infinity();
  }

  /// Upper bound on log2(log2(value)) as a tower (useful when log2_upper overflows).
  Tower log2_tower() const { return detail::tower_log2(upper_); }

 private:
  std::optional<mpz_class> exact_;
  Tower upper_;
};

enum class BoundMode { Exact, Log2 };

inline constexpr std::size_t kDefaultBitBudget = std::size_t{1} << 20;

/// Arithmetic context: exact values are kept while they fit in `bit_budget`
/// bits. Past that, exact mode either falls back to bounds (recording a
/// warning) or throws E_BIT_BUDGET when `strict`.
class BoundContext {
 public:
  explicit BoundContext(BoundMode mode = BoundMode::Exact, std::size_t bit_budget = kDefaultBitBudget,
                        bool strict = false)
      : mode_(mode), budget_(bit_budget), strict_(strict) {}

  BoundMode mode() const noexcept { return mode_; }
  std::size_t bit_budget() const noexcept { return budget_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  BoundValue add(const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) return checked(a.exact() + b.exact());
    return BoundValue::bounded(detail::tower_add(a.upper(), b.upper()));
  }

  /// a - b for b <= a; without exact operands the subtraction is dropped.
  BoundValue sub(const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) {
      if (b.exact() > a.exact()) fail(ErrorCode::Precondition, "bound subtraction would go negative");
      return mpz_class(a.exact() - b.exact());
    }
    return BoundValue::bounded(a.upper());
  }

  BoundValue mul(const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) {
      const auto bits = mpz_sizeinbase(a.exact().get_mpz_t(), 2) + mpz_sizeinbase(b.exact().get_mpz_t(), 2);
      if (bits <= budget_ + 1) return checked(a.exact() * b.exact());
      overflow("product");
    }
    return BoundValue::bounded(detail::tower_mul(a.upper(), b.upper()));
  }

  BoundValue pow(const BoundValue& base, const BoundValue& e) {
    if (base.is_exact() && e.is_exact()) {
      const auto& b = base.exact();
      const auto& x = e.exact();
      if (b <= 1 || x == 0) return x == 0 ? mpz_class(1) : b;
      // bits(b^x) <= x * bits(b)
      const mpz_class bits = x * static_cast<unsigned long>(mpz_sizeinbase(b.get_mpz_t(), 2));
      if (x.fits_ulong_p() && bits <= static_cast<unsigned long>(budget_)) {
        mpz_class out;
        mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), x.get_ui());
        return checked(out);
      }
      overflow("power");
    }
    return BoundValue::bounded(detail::tower_pow(base.upper(), e.upper()));
  }

  /// C(n, k) for small k; beyond the budget, n^k serves as the bound.
  BoundValue binomial(const BoundValue& n, unsigned long k) {
    if (n.is_exact()) {
      const auto bits = mpz_sizeinbase(n.exact().get_mpz_t(), 2) * k;
      if (bits <= budget_) {
        mpz_class out;
        mpz_bin_ui(out.get_mpz_t(), n.exact().get_mpz_t(), k);
        return out;
      }
      overflow("binomial");
    }
    return BoundValue::bounded(detail::tower_pow(n.upper(), detail::tower_of(mpz_class(k))));
  }

 private:
  BoundValue checked(mpz_class v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) <= budget_) return v;
    overflow("value");
    return BoundValue::bounded(detail::tower_of(v));
  }

  void overflow(const char* what) {
    const std::string msg = std::string(what) + " exceeds the bit budget of " + std::to_string(budget_) +
                            " bits; continuing with certified log2 bounds";
    if (strict_ && mode_ == BoundMode::Exact) fail(ErrorCode::BitBudget, msg);
    for (auto& w : warnings_)
      if (w == msg) return;
    warnings_.push_back(msg);
  }

  BoundMode mode_;
  std::size_t budget_;
  bool strict_;
  std::vector<std::string> warnings_;
};

/// Named intermediate values in evaluation order.
struct BoundReport {
  std::vector<std::pair<std::string, std::uint64_t>> inputs;
  std::vector<std::pair<std::string, BoundValue>> trace;
  std::vector<std::string> warnings;
  BoundMode mode = BoundMode::Exact;

  const BoundValue& get(const std::string& name) const {
    for (auto it = trace.rbegin(); it != trace.rend(); ++it)
      if (it->first == name) return it->second;
    fail(ErrorCode::Precondition, "no bound named " + name);
  }
};

/// Decimal text in exact mode (when known), otherwise an upper bound on log2,
/// or the tower form "2^^k(t)" once log2 itself overflows.
inline std::string render_bound(const BoundValue& v, BoundMode mode) {
  if (mode == BoundMode::Exact && v.is_exact()) return v.exact().get_str();
  const double l = v.log2_upper();
  std::ostringstream os;
  if (std::isfinite(l)) {
    os.precision(17);
    os << "log2<=" << l;
  } else {
    os.precision(17);
    os << "2^^" << v.upper().level << "(" << v.upper().top << ")";
  }
  return os.str();
}

struct SumProductBound {
  mpz_class sum_degree, sum_height, product_degree, product_height;
};

/// Degree and height of sums and products of m algebraic series of degrees
/// d_i and heights h_i, coefficients of degree <= dc.
inline SumProductBound bound_sum_product(const std::vector<std::uint64_t>& degrees,
                                         const std::vector<std::uint64_t>& heights, std::uint64_t dc) {
  if (degrees.empty() || degrees.size() != heights.size())
    fail(ErrorCode::DimMismatch, "need m >= 1 degrees and as many heights");
  mpz_class prod = 1;
  std::uint64_t hmax = 0;
  for (auto d : degrees) prod *= static_cast<unsigned long>(d);
  for (auto h : heights) hmax = std::max(hmax, h);
  const mpz_class m = static_cast<unsigned long>(degrees.size());
  SumProductBound b;
  b.sum_degree = prod;
  b.product_degree = prod;
  b.sum_height = m * prod * (mpz_class(static_cast<unsigned long>(hmax)) + static_cast<unsigned long>(dc));
  b.product_height = m * prod * static_cast<unsigned long>(hmax);
  return b;
}

struct ValuationTailBound {
  BoundValue nu_cap, shifted_height;
  BoundValue coefficient_degree, coefficient_height;  // f-coefficients
  BoundValue tail_degree, tail_height;                // g-tails
};

inline ValuationTailBound bound_valuation_and_tails(std::uint64_t d, std::uint64_t h, std::uint64_t k,
                                                    BoundContext& ctx) {
  if (d < 1) fail(ErrorCode::Precondition, "degree must be at least 1");
  ValuationTailBound b;
  b.nu_cap = h;
  b.shifted_height = ctx.mul(h, d + 1);
  const BoundValue two = 2u, eight = 8u;
  const auto e8 = ctx.pow(eight, k + 1);
  b.coefficient_degree = ctx.pow(d, ctx.pow(two, k));
  b.coefficient_height = ctx.mul(ctx.mul(e8, ctx.pow(d, ctx.pow(two, k + 2))), h);
  b.tail_degree = ctx.pow(d, ctx.pow(two, k + 1));
  b.tail_height = ctx.mul(ctx.mul(e8, ctx.pow(d, ctx.mul(3u, ctx.pow(two, k + 1)))), h);
  return b;
}

namespace detail {

inline BoundValue rationalization_one(const BoundValue& d, const BoundValue& h, BoundContext& ctx) {
  // h d (2d-1)(2d+1) + 2h(d+1) + 1
  const auto two_d = ctx.mul(2u, d);
  auto core = ctx.mul(ctx.mul(h, d), ctx.mul(ctx.sub(two_d, 1u), ctx.add(two_d, 1u)));
  return ctx.add(ctx.add(core, ctx.mul(ctx.mul(2u, h), ctx.add(d, 1u))), 1u);
}

inline BoundValue rationalization_rec(std::uint64_t n, const BoundValue& d, const BoundValue& h, BoundContext& ctx,
                                      BoundReport& rep) {
  const std::string tag = "[n=" + std::to_string(n) + "]";
  if (n == 1) {
    auto N = rationalization_one(d, h, ctx);
    rep.trace.push_back({"N" + tag, N});
    return N;
  }
  const BoundValue one = 1u, two = 2u;
  const auto two_d = ctx.mul(two, d);
  const auto hd = ctx.mul(h, d);
  const auto hd2d1 = ctx.mul(hd, ctx.sub(two_d, one));  // h d (2d-1)
  const auto M = ctx.add(ctx.add(ctx.mul(hd2d1, ctx.add(two_d, one)), ctx.mul(two, hd)), one);
  const auto tower_exp = ctx.pow(two, hd2d1);  // 2^(hd(2d-1))
  const auto d0 = ctx.pow(d, ctx.sub(tower_exp, one));
  const auto h0 = ctx.pow(d, ctx.mul(ctx.mul(ctx.mul(8u, ctx.mul(d, d)), h), tower_exp));
  const auto M2 = ctx.mul(M, M);
  const auto d0M2 = ctx.pow(d0, M2);
  const auto degB = ctx.mul(ctx.sub(ctx.add(h0, ctx.mul(two, M)), two), d0M2);
  const auto M1 = ctx.mul(ctx.sub(M, one), d0M2);
  const auto d0p1M2 = ctx.mul(ctx.add(d0, one), M2);
  const auto d1 = ctx.pow(d0, d0p1M2);
  const auto Mpow = ctx.pow(M, ctx.mul(two, d0M2));  // M^(2 d0^(M^2))
  auto h1 = ctx.mul(Mpow, ctx.pow(d0, ctx.mul(d0p1M2, Mpow)));
  h1 = ctx.mul(h1, d0M2);
  h1 = ctx.mul(h1, ctx.pow(d0, d0M2));
  h1 = ctx.mul(h1, h0);
  for (auto& [name, v] : std::initializer_list<std::pair<const char*, const BoundValue*>>{
           {"M", &M}, {"d0", &d0}, {"h0", &h0}, {"degB", &degB}, {"M1", &M1}, {"d1", &d1}, {"h1", &h1}})
    rep.trace.push_back({name + tag, *v});
  auto inner = rationalization_rec(n - 1, d1, h1, ctx, rep);
  auto N = ctx.add(ctx.mul(two, ctx.sub(h, one)), inner);
  rep.trace.push_back({"N" + tag, N});
  return N;
}

}  // namespace detail

/// N(n, d, h) with the intermediates M, d0, h0, degB, M1, d1, h1 of each
/// recursion level; the final entry is named "N".
inline BoundReport bound_rationalization(std::uint64_t n, std::uint64_t d, std::uint64_t h, BoundContext& ctx) {
  if (n < 1 || d < 1 || h < 1) fail(ErrorCode::Precondition, "bound_rationalization needs n, d, h >= 1");
  BoundReport rep;
  rep.mode = ctx.mode();
  rep.inputs = {{"n", n}, {"d", d}, {"h", h}};
  auto N = detail::rationalization_rec(n, d, h, ctx, rep);
  rep.trace.push_back({"N", N});
  rep.warnings = ctx.warnings();
  return rep;
}

inline BoundValue rationalization_height(std::uint64_t d, std::uint64_t h) {
  BoundContext ctx;
  return bound_rationalization(1, d, h, ctx).get("N");
}

/// A = C(N + 2n, N), degree cap p^A and height cap A^2 p^(A+1).
inline BoundReport bound_final(std::uint64_t n, std::uint64_t d, std::uint64_t h, std::uint64_t p, BoundContext& ctx) {
  auto rep = bound_rationalization(n, d, h, ctx);
  rep.inputs.push_back({"p", p});
  const auto N = rep.get("N");
  const auto A = ctx.binomial(ctx.add(N, 2 * n), static_cast<unsigned long>(2 * n));
  const auto deg = ctx.pow(p, A);
  const auto height = ctx.mul(ctx.mul(A, A), ctx.pow(p, ctx.add(A, 1u)));
  rep.trace.push_back({"A", A});
  rep.trace.push_back({"degreeCap", deg});
  rep.trace.push_back({"heightCap", height});
  rep.warnings = ctx.warnings();
  return rep;
}

/// Rational functions directly: an m-variable R of height h has invariant
/// space dimension C(h+m, m), so degree <= p^dim and height <= dim^2 p^(dim+1).
inline BoundReport bound_rational_direct(std::uint64_t m, std::uint64_t h, std::uint64_t p, BoundContext& ctx) {
  BoundReport rep;
  rep.mode = ctx.mode();
  rep.inputs = {{"m", m}, {"h", h}, {"p", p}};
  const auto dim = ctx.binomial(BoundValue(h + m), static_cast<unsigned long>(m));
  rep.trace.push_back({"dimV", dim});
  rep.trace.push_back({"degreeCap", ctx.pow(p, dim)});
  rep.trace.push_back({"heightCap", ctx.mul(ctx.mul(dim, dim), ctx.pow(p, ctx.add(dim, 1u)))});
  rep.warnings = ctx.warnings();
  return rep;
}

/// Standalone caps: total degree h(2d-1)(2d+1)+2h+1, coefficient degree
/// d^(2^(h(2d-1))-1), height d^(8dh 2^(h(2d-1))).
inline BoundReport bound_lemma_diag(std::uint64_t d, std::uint64_t h, BoundContext& ctx) {
  if (d < 1) fail(ErrorCode::Precondition, "degree must be at least 1");
  BoundReport rep;
  rep.mode = ctx.mode();
  rep.inputs = {{"d", d}, {"h", h}};
  const BoundValue one = 1u, two = 2u;
  const auto h2d1 = ctx.mul(h, 2 * d - 1);
  rep.trace.push_back({"totalDegree", ctx.add(ctx.add(ctx.mul(h2d1, 2 * d + 1), 2 * h), one)});
  const auto t = ctx.pow(two, h2d1);
  rep.trace.push_back({"coefficientDegree", ctx.pow(d, ctx.sub(t, one))});
  rep.trace.push_back({"height", ctx.pow(d, ctx.mul(8 * d * h, t))});
  rep.warnings = ctx.warnings();
  return rep;
}

}  // namespace diagfp
