#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "diagfp/series.hpp"

namespace diagfp {

enum class DiagonalMode { Full, Half, LastPair };

struct DiagonalSpec {
  DiagonalMode mode = DiagonalMode::Full;
  std::size_t source_vars = 1;

  void validate() const {
    if (mode == DiagonalMode::Half && source_vars % 2 != 0)
      fail(ErrorCode::DimMismatch, "half diagonal needs an even variable count");
    if (mode == DiagonalMode::LastPair && source_vars < 2)
      fail(ErrorCode::DimMismatch, "last-pair diagonal needs at least two variables");
  }
};

namespace detail {

// Target index t maps to the source exponent vector via `pick`; the source
// shift is folded in, so a stored source coefficient at e denotes x^(e+v).
template <typename Pick>
TruncatedSeries diagonal_generic(const TruncatedSeries& s, std::size_t out_vars, std::size_t order, Pick&& pick) {
  const auto& v = s.shift();
  // The output shift is chosen so that every used source index is >= 0.
  std::vector<std::int64_t> out_shift(out_vars, 0);
  std::vector<std::size_t> src(s.nvars());
  for (std::size_t k = 0; k < s.nvars(); ++k) {
    std::size_t target = pick.target_of(k);
    out_shift[target] = std::max(out_shift[target], v[k]);
  }
  for (std::size_t t = 0; t < out_vars; ++t)
    for (std::size_t k = 0; k < s.nvars(); ++k)
      if (pick.target_of(k) == t && out_shift[t] - v[k] + static_cast<std::int64_t>(order) > static_cast<std::int64_t>(s.order()))
        fail(ErrorCode::InsufficientPrecision, "source box of order " + std::to_string(s.order()) +
                                                   " cannot supply " + std::to_string(order) + " diagonal terms");
  TruncatedSeries out(s.field(), out_vars, order);
  out.for_each_index([&](std::span<const std::size_t> e, std::size_t) {
    for (std::size_t k = 0; k < s.nvars(); ++k) {
      auto t = pick.target_of(k);
      src[k] = static_cast<std::size_t>(static_cast<std::int64_t>(e[t]) + out_shift[t] - v[k]);
    }
    out.set_stored(e, s.stored(src));
  });
  out.set_shift(out_shift);
  return out;
}

struct FullPick {
  std::size_t target_of(std::size_t) const { return 0; }
};
struct HalfPick {
  std::size_t n;
  std::size_t target_of(std::size_t k) const { return k % n; }
};
struct LastPairPick {
  std::size_t m;
  std::size_t target_of(std::size_t k) const { return k == m - 1 ? m - 2 : k; }
};

}  // namespace detail

/// Univariate series whose n-th coefficient is the source coefficient at (n, ..., n).
inline TruncatedSeries diagonal_full(const TruncatedSeries& s, std::size_t order) {
  return detail::diagonal_generic(s, 1, order, detail::FullPick{});
}

/// Pairs variable k with variable n+k of a 2n-variable series.
inline TruncatedSeries diagonal_half(const TruncatedSeries& s, std::size_t order) {
  DiagonalSpec{DiagonalMode::Half, s.nvars()}.validate();
  const std::size_t n = s.nvars() / 2;
  return detail::diagonal_generic(s, n, order, detail::HalfPick{n});
}

/// Identifies the last variable y with x_{m-1}: keeps coefficients at (i_1, ..., i_{m-1}, i_{m-1}).
inline TruncatedSeries diagonal_last_pair(const TruncatedSeries& s, std::size_t order) {
  DiagonalSpec{DiagonalMode::LastPair, s.nvars()}.validate();
  return detail::diagonal_generic(s, s.nvars() - 1, order, detail::LastPairPick{s.nvars()});
}

inline TruncatedSeries apply_diagonal(const DiagonalSpec& spec, const TruncatedSeries& s, std::size_t order) {
  if (spec.source_vars != s.nvars()) fail(ErrorCode::DimMismatch, "diagonal spec does not match the series");
  switch (spec.mode) {
    case DiagonalMode::Full: return diagonal_full(s, order);
    case DiagonalMode::Half: return diagonal_half(s, order);
    case DiagonalMode::LastPair: return diagonal_last_pair(s, order);
  }
  return diagonal_full(s, order);
}

/// Valuation in the last variable: least exponent of x_m occurring,
/// including the monomial shift.
inline std::int64_t nu_last(const TruncatedSeries& s) {
  const std::size_t last = s.nvars() - 1;
  std::int64_t best = -1;
  s.for_each_index([&](std::span<const std::size_t> e, std::size_t idx) {
    if (s.data()[idx] == 0) return;
    auto v = static_cast<std::int64_t>(e[last]);
    if (best < 0 || v < best) best = v;
  });
  if (best < 0) fail(ErrorCode::ZeroUpToPrecision, "no nonzero coefficient in the stored box");
  return best + s.shift()[last];
}

inline std::int64_t nu_last(const MultiPoly& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroUpToPrecision, "valuation of the zero polynomial");
  return f.min_degree_in(f.nvars() - 1);
}

}  // namespace diagfp
