#pragma once

#include <vector>

#include "diagfp/multipoly.hpp"

namespace diagfp {

/// Coefficients of f as a polynomial in variable `var`: out[k] multiplies var^k.
inline std::vector<MultiPoly> coefficients_in(const MultiPoly& f, std::size_t var) {
  const int d = f.degree_in(var);
  std::vector<MultiPoly::Builder> builders;
  for (int k = 0; k <= d; ++k) builders.emplace_back(f.field(), f.nvars());
  for (auto& [m, c] : f.terms()) {
    Monomial rest = m;
    rest[var] = 0;
    builders[m[var]].add(rest, c);
  }
  std::vector<MultiPoly> out;
  for (auto& b : builders) out.push_back(std::move(b).build());
  return out;
}

/// Fraction-free (Bareiss) determinant of a square matrix over F_p[x...].
inline MultiPoly bareiss_determinant(std::vector<std::vector<MultiPoly>> a, const PrimeField& field,
                                     std::size_t nvars) {
  const std::size_t n = a.size();
  if (n == 0) return MultiPoly::constant(field, nvars, 1);
  MultiPoly prev = MultiPoly::constant(field, nvars, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k].is_zero()) ++swap;
      if (swap == n) return MultiPoly(field, nvars);
      std::swap(a[k], a[swap]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        auto num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        auto q = num.divide_exact(prev);
        if (!q) fail(ErrorCode::Precondition, "Bareiss step is not an exact division");
        a[i][j] = std::move(*q);
      }
      a[i][k] = MultiPoly(field, nvars);
    }
    prev = a[k][k];
  }
  auto det = a[n - 1][n - 1];
  return negate ? -det : det;
}

/// Sylvester matrix of f and g with respect to variable `var`.
inline std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
  auto fc = coefficients_in(f, var);
  auto gc = coefficients_in(g, var);
  const std::size_t df = fc.size() - 1, dg = gc.size() - 1, n = df + dg;
  std::vector<std::vector<MultiPoly>> s(n, std::vector<MultiPoly>(n, MultiPoly(f.field(), f.nvars())));
  for (std::size_t r = 0; r < dg; ++r)
    for (std::size_t k = 0; k <= df; ++k) s[r][r + (df - k)] = fc[k];
  for (std::size_t r = 0; r < df; ++r)
    for (std::size_t k = 0; k <= dg; ++k) s[dg + r][r + (dg - k)] = gc[k];
  return s;
}

/// Resultant of f and g with respect to their last variable, as the
/// Sylvester determinant. The result does not involve the last variable.
inline MultiPoly resultant_wrt_last(const MultiPoly& f, const MultiPoly& g) {
  if (f.is_zero() || g.is_zero()) fail(ErrorCode::ZeroInput, "resultant of a zero polynomial");
  if (f.nvars() != g.nvars()) fail(ErrorCode::DimMismatch, "resultant operands differ in variable count");
  const std::size_t var = f.nvars() - 1;
  return bareiss_determinant(sylvester_matrix(f, g, var), f.field(), f.nvars());
}

}  // namespace diagfp
