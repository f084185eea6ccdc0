#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diagfp/field.hpp"

namespace diagfp {

inline constexpr std::size_t kMaxVars = 12;

/// Exponent vector in N^m, padded with zeros up to kMaxVars.
struct Monomial {
  std::array<std::uint32_t, kMaxVars> e{};

  std::uint32_t& operator[](std::size_t i) { return e[i]; }
  std::uint32_t operator[](std::size_t i) const { return e[i]; }

  std::uint64_t total_degree() const {
    std::uint64_t s = 0;
    for (auto v : e) s += v;
    return s;
  }
  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > other.e[i]) return false;
    return true;
  }
  friend Monomial operator+(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
  }
  // Caller guarantees b divides a.
  friend Monomial operator-(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
  }
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : m.e) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Sparse multivariate polynomial over F_p. Terms are kept sorted by
/// lexicographic exponent order with no zero coefficients, so equal
/// polynomials have identical term vectors.
class MultiPoly {
 public:
  using Term = std::pair<Monomial, std::uint32_t>;
  static constexpr int kZeroDegree = -1;

  MultiPoly(const PrimeField& field, std::size_t nvars) : field_(field), nvars_(nvars) {
    if (nvars > kMaxVars) fail(ErrorCode::DimMismatch, "too many variables: " + std::to_string(nvars));
  }

  static MultiPoly constant(const PrimeField& field, std::size_t nvars, std::int64_t c) {
    MultiPoly r(field, nvars);
    auto v = field.reduce(c);
    if (v) r.terms_.push_back({Monomial{}, v});
    return r;
  }
  static MultiPoly variable(const PrimeField& field, std::size_t nvars, std::size_t index, std::uint32_t power = 1) {
    MultiPoly r(field, nvars);
    if (index >= nvars) fail(ErrorCode::DimMismatch, "variable index out of range");
    Monomial m;
    m[index] = power;
    r.terms_.push_back({m, 1 % field.prime()});
    return r;
  }
  static MultiPoly monomial(const PrimeField& field, std::size_t nvars, const Monomial& m, std::int64_t c) {
    MultiPoly r(field, nvars);
    auto v = field.reduce(c);
    if (v) r.terms_.push_back({m, v});
    return r;
  }

  /// Accumulates terms in any order; `build` reduces and canonicalizes.
  class Builder {
   public:
    Builder(const PrimeField& field, std::size_t nvars) : field_(field), nvars_(nvars) {}
    void add(const Monomial& m, std::uint64_t c) {
      auto& slot = acc_[m];
      slot = (slot + c) % field_.prime();
    }
    void reserve(std::size_t n) { acc_.reserve(n); }
    MultiPoly build() && {
      MultiPoly r(field_, nvars_);
      r.terms_.reserve(acc_.size());
      for (auto& [m, c] : acc_)
        if (c) r.terms_.push_back({m, static_cast<std::uint32_t>(c)});
      std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
      return r;
    }

   private:
    PrimeField field_;
    std::size_t nvars_;
    std::unordered_map<Monomial, std::uint64_t, MonomialHash> acc_;
  };

  const PrimeField& field() const noexcept { return field_; }
  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  int total_degree() const {
    if (is_zero()) return kZeroDegree;
    std::uint64_t d = 0;
    for (auto& t : terms_) d = std::max(d, t.first.total_degree());
    return static_cast<int>(d);
  }
  int degree_in(std::size_t var) const {
    if (is_zero()) return kZeroDegree;
    std::uint32_t d = 0;
    for (auto& t : terms_) d = std::max(d, t.first[var]);
    return static_cast<int>(d);
  }
  /// Least exponent of `var` over all terms.
  int min_degree_in(std::size_t var) const {
    if (is_zero()) return kZeroDegree;
    std::uint32_t d = UINT32_MAX;
    for (auto& t : terms_) d = std::min(d, t.first[var]);
    return static_cast<int>(d);
  }

  std::uint32_t coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& k) { return t.first < k; });
    return (it != terms_.end() && it->first == m) ? it->second : 0;
  }
  std::uint32_t constant_term() const { return coefficient(Monomial{}); }

  /// Lexicographically largest term (the leading term for exact division).
  const Term& leading_term() const { return terms_.back(); }

  std::uint32_t evaluate(std::span<const std::uint32_t> point) const {
    std::uint64_t acc = 0;
    for (auto& [m, c] : terms_) {
      std::uint64_t v = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i]) v = v * field_.pow(point[i], m[i]) % field_.prime();
      acc = (acc + v) % field_.prime();
    }
    return static_cast<std::uint32_t>(acc);
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.second = field_.neg(t.second);
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, true); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check_compatible(a, b);
    if (a.is_zero() || b.is_zero()) return MultiPoly(a.field_, a.nvars_);
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    if (small.size() == 1 && small.terms_[0].first == Monomial{}) return large.scaled(small.terms_[0].second);
    Builder builder(a.field_, a.nvars_);
    builder.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 22));
    const auto p = a.field_.prime();
    for (auto& [ma, ca] : small.terms_)
      for (auto& [mb, cb] : large.terms_) builder.add(ma + mb, static_cast<std::uint64_t>(ca) * cb % p);
    return std::move(builder).build();
  }

  MultiPoly scaled(std::uint32_t c) const {
    MultiPoly r(field_, nvars_);
    c %= field_.prime();
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.second = field_.mul(t.second, c);
    return r;
  }

  MultiPoly shifted(const Monomial& m) const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.first = t.first + m;
    return r;
  }

  MultiPoly pow(std::uint64_t k) const {
    MultiPoly result = constant(field_, nvars_, 1);
    MultiPoly base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  MultiPoly derivative(std::size_t var) const {
    Builder b(field_, nvars_);
    for (auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d[var] -= 1;
      b.add(d, field_.mul(c, field_.reduce_u(m[var])));
    }
    return std::move(b).build();
  }

  /// Applies an exponent map term by term and recombines like terms.
  template <typename F>
  MultiPoly map_exponents(std::size_t new_nvars, F&& f) const {
    Builder b(field_, new_nvars);
    for (auto& [m, c] : terms_) b.add(f(m), c);
    return std::move(b).build();
  }

  /// Reinterprets the polynomial in a ring with more (or, if unused, fewer) variables.
  MultiPoly with_nvars(std::size_t n) const {
    for (auto& t : terms_)
      for (std::size_t i = n; i < nvars_; ++i)
        if (t.first[i]) fail(ErrorCode::DimMismatch, "cannot drop a variable that occurs");
    MultiPoly r(field_, n);
    r.terms_ = terms_;
    return r;
  }

  /// Replaces variable `var` by the polynomial `value`.
  MultiPoly substitute(std::size_t var, const MultiPoly& value) const {
    check_compatible(*this, value);
    std::vector<MultiPoly> powers{constant(field_, nvars_, 1)};
    MultiPoly result(field_, nvars_);
    for (auto& [m, c] : terms_) {
      while (powers.size() <= m[var]) powers.push_back(powers.back() * value);
      Monomial rest = m;
      rest[var] = 0;
      result = result + powers[m[var]].shifted(rest).scaled(c);
    }
    return result;
  }

  /// Largest monomial dividing every term (the monomial content).
  Monomial monomial_content() const {
    Monomial g;
    if (is_zero()) return g;
    g = terms_.front().first;
    for (auto& t : terms_)
      for (std::size_t i = 0; i < kMaxVars; ++i) g[i] = std::min(g[i], t.first[i]);
    return g;
  }
  /// Divides by a monomial known to divide every term.
  MultiPoly divided_by_monomial(const Monomial& m) const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) {
      if (!m.divides(t.first)) fail(ErrorCode::Precondition, "monomial does not divide polynomial");
      t.first = t.first - m;
    }
    return r;
  }

  /// Exact division; std::nullopt if `divisor` does not divide *this.
  std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const {
    check_compatible(*this, divisor);
    if (divisor.is_zero()) fail(ErrorCode::ZeroInput, "division by the zero polynomial");
    MultiPoly quotient(field_, nvars_);
    MultiPoly rem = *this;
    const auto& [lm, lc] = divisor.leading_term();
    const auto lc_inv = field_.inv(lc);
    std::vector<Term> qterms;
    while (!rem.is_zero()) {
      const auto& [rm, rc] = rem.leading_term();
      if (!lm.divides(rm)) return std::nullopt;
      Monomial qm = rm - lm;
      std::uint32_t qc = field_.mul(rc, lc_inv);
      qterms.push_back({qm, qc});
      rem = rem - divisor.shifted(qm).scaled(qc);
    }
    std::sort(qterms.begin(), qterms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    quotient.terms_ = std::move(qterms);
    return quotient;
  }

  std::size_t hash() const noexcept {
    std::size_t h = nvars_;
    MonomialHash mh;
    for (auto& [m, c] : terms_) h = h * 1000003u ^ (mh(m) + c * 0x9e3779b97f4a7c15ULL);
    return h;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  static void check_compatible(const MultiPoly& a, const MultiPoly& b) {
    if (!(a.field_ == b.field_)) fail(ErrorCode::DimMismatch, "polynomials over different fields");
    if (a.nvars_ != b.nvars_) fail(ErrorCode::DimMismatch, "polynomials with different variable counts");
  }

  static MultiPoly combine(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    check_compatible(a, b);
    const auto& f = a.field_;
    MultiPoly r(f, a.nvars_);
    r.terms_.reserve(a.size() + b.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        r.terms_.push_back({ib->first, subtract ? f.neg(ib->second) : ib->second});
        ++ib;
      } else {
        auto c = subtract ? f.sub(ia->second, ib->second) : f.add(ia->second, ib->second);
        if (c) r.terms_.push_back({ia->first, c});
        ++ia;
        ++ib;
      }
    }
    return r;
  }

  PrimeField field_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

struct MultiPolyHash {
  std::size_t operator()(const MultiPoly& p) const noexcept { return p.hash(); }
};

}  // namespace diagfp
