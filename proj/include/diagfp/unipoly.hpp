#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "diagfp/field.hpp"
#include "diagfp/multipoly.hpp"

namespace diagfp {

/// Dense univariate polynomial over F_p; coefficient i multiplies x^i.
/// Used wherever only one variable occurs (annihilator coefficients,
/// transition matrices, resultant outputs in x).
class UniPoly {
 public:
  explicit UniPoly(const PrimeField& field) : field_(field) {}
  UniPoly(const PrimeField& field, std::vector<std::uint32_t> coeffs) : field_(field), c_(std::move(coeffs)) {
    for (auto& v : c_) v %= field_.prime();
    trim();
  }
  static UniPoly constant(const PrimeField& field, std::int64_t v) { return UniPoly(field, {field.reduce(v)}); }
  static UniPoly monomial(const PrimeField& field, std::size_t degree, std::uint32_t c = 1) {
    std::vector<std::uint32_t> v(degree + 1, 0);
    v[degree] = c;
    return UniPoly(field, std::move(v));
  }

  const PrimeField& field() const noexcept { return field_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// MultiPoly::kZeroDegree for the zero polynomial.
  int degree() const noexcept { return c_.empty() ? MultiPoly::kZeroDegree : static_cast<int>(c_.size()) - 1; }
  std::uint32_t operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  std::uint32_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

  /// Order at x = 0 (index of the first nonzero coefficient).
  int order() const noexcept {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i]) return static_cast<int>(i);
    return MultiPoly::kZeroDegree;
  }

  std::uint32_t evaluate(std::uint32_t x) const {
    std::uint64_t acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * x + *it) % field_.prime();
    return static_cast<std::uint32_t>(acc);
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<std::uint32_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_.add(a[i], b[i]);
    return UniPoly(a.field_, std::move(r));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<std::uint32_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_.sub(a[i], b[i]);
    return UniPoly(a.field_, std::move(r));
  }
  UniPoly operator-() const { return UniPoly(field_) - *this; }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly(a.field_);
    const std::uint64_t p = a.field_.prime();
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    // Products are < 2^62; flush every few steps to stay below 2^64.
    const std::uint64_t flush = p < (1u << 16) ? 1024 : 2;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!a.c_[i]) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += static_cast<std::uint64_t>(a.c_[i]) * b.c_[j];
      if ((i + 1) % flush == 0)
        for (auto& v : acc) v %= p;
    }
    std::vector<std::uint32_t> r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint32_t>(acc[i] % p);
    return UniPoly(a.field_, std::move(r));
  }

  UniPoly scaled(std::uint32_t s) const {
    std::vector<std::uint32_t> r = c_;
    for (auto& v : r) v = field_.mul(v, s);
    return UniPoly(field_, std::move(r));
  }

  /// x^k-dilation: f(x) -> f(x^k).
  UniPoly dilated(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<std::uint32_t> r((c_.size() - 1) * k + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
    return UniPoly(field_, std::move(r));
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly(field_);
    std::vector<std::uint32_t> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = field_.mul(c_[i], field_.reduce_u(i));
    return UniPoly(field_, std::move(r));
  }

  /// Euclidean division; returns (quotient, remainder).
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
    if (d.is_zero()) fail(ErrorCode::ZeroInput, "univariate division by zero");
    std::vector<std::uint32_t> rem = c_;
    if (rem.size() < d.c_.size()) return {UniPoly(field_), *this};
    std::vector<std::uint32_t> q(rem.size() - d.c_.size() + 1, 0);
    const auto inv = field_.inv(d.leading());
    for (std::size_t i = rem.size(); i-- >= d.c_.size();) {
      auto coef = field_.mul(rem[i], inv);
      q[i - (d.c_.size() - 1)] = coef;
      if (!coef) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) {
        auto& slot = rem[i - (d.c_.size() - 1) + j];
        slot = field_.sub(slot, field_.mul(coef, d.c_[j]));
      }
    }
    rem.resize(d.c_.size() - 1);
    return {UniPoly(field_, std::move(q)), UniPoly(field_, std::move(rem))};
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return scaled(field_.inv(leading()));
  }

  friend UniPoly gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
      auto r = a.divmod(b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  MultiPoly to_multipoly(std::size_t nvars, std::size_t var) const {
    MultiPoly::Builder b(field_, nvars);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i]) continue;
      Monomial m;
      m[var] = static_cast<std::uint32_t>(i);
      b.add(m, c_[i]);
    }
    return std::move(b).build();
  }

  /// Reads a polynomial in which only variable `var` occurs.
  static UniPoly from_multipoly(const MultiPoly& f, std::size_t var) {
    std::vector<std::uint32_t> c;
    for (auto& [m, v] : f.terms()) {
      for (std::size_t i = 0; i < kMaxVars; ++i)
        if (i != var && m[i]) fail(ErrorCode::DimMismatch, "polynomial is not univariate");
      if (c.size() <= m[var]) c.resize(m[var] + 1, 0);
      c[m[var]] = v;
    }
    return UniPoly(f.field(), std::move(c));
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  PrimeField field_;
  std::vector<std::uint32_t> c_;
};

}  // namespace diagfp
