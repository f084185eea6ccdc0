#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "diagfp/rational.hpp"
#include "diagfp/unipoly.hpp"

namespace diagfp {

/// Default ceiling on stored coefficients for a single expansion.
inline constexpr std::size_t kDefaultTermBudget = std::size_t{1} << 26;

/// Box-truncated power series: coefficients are known for every exponent
/// vector with all components < order and unknown elsewhere. An optional
/// monomial shift v makes the object denote x^v * (stored series).
class TruncatedSeries {
 public:
  TruncatedSeries(const PrimeField& field, std::size_t nvars, std::size_t order)
      : field_(field), nvars_(nvars), order_(order), shift_(nvars, 0) {
    if (nvars == 0 || nvars > kMaxVars) fail(ErrorCode::DimMismatch, "series variable count out of range");
    std::size_t size = 1;
    for (std::size_t i = 0; i < nvars; ++i) size *= order;
    data_.assign(size, 0);
  }

  static TruncatedSeries univariate(const PrimeField& field, std::vector<std::uint32_t> coeffs) {
    TruncatedSeries s(field, 1, coeffs.size());
    for (auto& c : coeffs) c %= field.prime();
    s.data_ = std::move(coeffs);
    return s;
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t order() const noexcept { return order_; }
  const std::vector<std::int64_t>& shift() const noexcept { return shift_; }
  void set_shift(std::vector<std::int64_t> v) {
    if (v.size() != nvars_) fail(ErrorCode::DimMismatch, "shift length differs from variable count");
    shift_ = std::move(v);
  }
  const std::vector<std::uint32_t>& data() const noexcept { return data_; }

  /// Wraps row-major box data (last variable fastest).
  static TruncatedSeries from_box(const PrimeField& field, std::size_t nvars, std::size_t order,
                                  std::vector<std::uint32_t> data) {
    TruncatedSeries s(field, nvars, 1);
    s.order_ = order;
    std::size_t size = 1;
    for (std::size_t i = 0; i < nvars; ++i) size *= order;
    if (data.size() != size) fail(ErrorCode::DimMismatch, "box data has the wrong size");
    s.data_ = std::move(data);
    return s;
  }

  /// Flat index of a stored exponent (shift not applied).
  std::size_t index(std::span<const std::size_t> e) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] >= order_) fail(ErrorCode::InsufficientPrecision, "exponent outside the stored box");
      idx = idx * order_ + e[i];
    }
    return idx;
  }
  std::uint32_t stored(std::span<const std::size_t> e) const { return data_[index(e)]; }
  void set_stored(std::span<const std::size_t> e, std::uint32_t v) { data_[index(e)] = v % field_.prime(); }

  /// Univariate convenience accessors (stored coefficients, shift ignored).
  std::uint32_t operator[](std::size_t n) const { return data_.at(n); }
  std::vector<std::uint32_t> coefficients() const {
    if (nvars_ != 1) fail(ErrorCode::DimMismatch, "coefficients() needs a univariate series");
    return data_;
  }

  bool is_zero_prefix() const {
    return std::all_of(data_.begin(), data_.end(), [](auto v) { return v == 0; });
  }

  /// Calls f(exponent vector, flat index) for every stored coefficient in
  /// row-major order (last variable fastest).
  template <typename F>
  void for_each_index(F&& f) const {
    std::vector<std::size_t> e(nvars_, 0);
    for (std::size_t idx = 0; idx < data_.size(); ++idx) {
      f(std::span<const std::size_t>(e), idx);
      for (std::size_t k = nvars_; k-- > 0;) {
        if (++e[k] < order_) break;
        e[k] = 0;
      }
    }
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.shift_ == b.shift_ &&
           a.data_ == b.data_;
  }

 private:
  PrimeField field_;
  std::size_t nvars_;
  std::size_t order_;
  std::vector<std::int64_t> shift_;
  std::vector<std::uint32_t> data_;
};

/// Expands P/Q (Q(0) = 1) below the box of side `order`, using
/// S = P + (1 - Q) S evaluated in an order where every predecessor is known.
inline TruncatedSeries series_expand(const RationalFunction& r, std::size_t order,
                                     std::size_t budget = kDefaultTermBudget) {
  if (order == 0) fail(ErrorCode::InsufficientPrecision, "expansion order must be at least 1");
  const auto& field = r.field();
  const std::uint64_t p = field.prime();
  const std::size_t m = r.nvars();
  const auto& den = r.denominator();

  std::vector<std::size_t> pad(m, 0), dims(m), stride(m);
  for (auto& [mono, c] : den.terms())
    for (std::size_t k = 0; k < m; ++k) pad[k] = std::max<std::size_t>(pad[k], mono[k]);
  long double padded = 1;
  for (std::size_t k = 0; k < m; ++k) {
    dims[k] = order + pad[k];
    padded *= static_cast<long double>(dims[k]);
  }
  if (padded > static_cast<long double>(budget))
    fail(ErrorCode::Budget, "expansion needs " + std::to_string(static_cast<double>(padded)) +
                                " coefficients, budget is " + std::to_string(budget));
  std::size_t total = 1;
  for (std::size_t k = m; k-- > 0;) {
    stride[k] = total;
    total *= dims[k];
  }

  auto offset_of = [&](const Monomial& mono) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < m; ++k) off += mono[k] * stride[k];
    return off;
  };
  std::vector<std::size_t> offsets;
  std::vector<std::uint64_t> neg_coeffs;
  for (auto& [mono, c] : den.terms()) {
    if (mono == Monomial{}) continue;
    offsets.push_back(offset_of(mono));
    neg_coeffs.push_back(field.neg(c));
  }

  std::vector<std::uint32_t> work(total, 0);
  std::size_t base = 0;
  for (std::size_t k = 0; k < m; ++k) base += pad[k] * stride[k];
  for (auto& [mono, c] : r.numerator().terms()) {
    bool inside = true;
    for (std::size_t k = 0; k < m; ++k) inside = inside && mono[k] < order;
    if (inside) work[base + offset_of(mono)] = c;
  }

  // Sums of up to 2^31 products below 2^32 cannot overflow; otherwise reduce per term.
  const bool small_prime = p < (1u << 16) && offsets.size() < (1u << 30);
  std::vector<std::size_t> e(m, 0);
  std::size_t count = 1;
  for (std::size_t k = 0; k < m; ++k) count *= order;
  std::vector<std::uint32_t> result(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t idx = base;
    for (std::size_t k = 0; k < m; ++k) idx += e[k] * stride[k];
    std::uint64_t acc = work[idx];
    if (small_prime) {
      for (std::size_t t = 0; t < offsets.size(); ++t) acc += neg_coeffs[t] * work[idx - offsets[t]];
      acc %= p;
    } else {
      for (std::size_t t = 0; t < offsets.size(); ++t) acc = (acc + neg_coeffs[t] * work[idx - offsets[t]]) % p;
    }
    work[idx] = static_cast<std::uint32_t>(acc);
    result[n] = work[idx];
    for (std::size_t k = m; k-- > 0;) {
      if (++e[k] < order) break;
      e[k] = 0;
    }
  }
  return TruncatedSeries::from_box(field, m, order, std::move(result));
}

/// Product of a truncated series with a polynomial, kept on the same box.
inline TruncatedSeries multiply_truncated(const TruncatedSeries& s, const MultiPoly& f) {
  if (s.nvars() != f.nvars()) fail(ErrorCode::DimMismatch, "series/polynomial variable counts differ");
  const auto& field = s.field();
  TruncatedSeries out(field, s.nvars(), s.order());
  std::vector<std::size_t> src(s.nvars());
  s.for_each_index([&](std::span<const std::size_t> e, std::size_t idx) {
    std::uint64_t acc = 0;
    for (auto& [mono, c] : f.terms()) {
      bool ok = true;
      for (std::size_t k = 0; k < s.nvars() && ok; ++k) {
        if (mono[k] > e[k]) ok = false;
        else src[k] = e[k] - mono[k];
      }
      if (ok) acc = (acc + static_cast<std::uint64_t>(c) * s.stored(src)) % field.prime();
    }
    (void)idx;
    out.set_stored(e, static_cast<std::uint32_t>(acc));
  });
  out.set_shift(s.shift());
  return out;
}

/// Truncated series of a polynomial (exact on the box).
inline TruncatedSeries series_of(const MultiPoly& f, std::size_t order) {
  TruncatedSeries s(f.field(), f.nvars(), order);
  std::vector<std::size_t> e(f.nvars());
  for (auto& [mono, c] : f.terms()) {
    bool inside = true;
    for (std::size_t k = 0; k < f.nvars(); ++k) {
      e[k] = mono[k];
      inside = inside && mono[k] < order;
    }
    if (inside) s.set_stored(e, c);
  }
  return s;
}

// ---- univariate truncated arithmetic -------------------------------------

/// (a * b) mod x^n for coefficient vectors.
inline std::vector<std::uint32_t> mul_trunc(const PrimeField& field, const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b, std::size_t n) {
  std::vector<std::uint64_t> acc(n, 0);
  const std::uint64_t p = field.prime();
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (!a[i]) continue;
    const std::size_t lim = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < lim; ++j) acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
  }
  return {acc.begin(), acc.end()};
}

/// Frobenius in characteristic p: (sum a_n x^n)^(p^k) = sum a_n x^(n p^k),
/// returned to order n.
inline std::vector<std::uint32_t> frobenius_dilate(const std::vector<std::uint32_t>& g, std::uint64_t p_pow,
                                                   std::size_t n) {
  std::vector<std::uint32_t> out(n, 0);
  for (std::size_t i = 0; i < g.size() && i * p_pow < n; ++i) out[i * p_pow] = g[i];
  return out;
}

}  // namespace diagfp
