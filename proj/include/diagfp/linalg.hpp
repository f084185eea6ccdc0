#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diagfp/unipoly.hpp"

namespace diagfp {

using Row = std::vector<std::uint32_t>;
using Matrix = std::vector<Row>;

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix& a, const PrimeField& field) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    const auto inv = field.inv(a[r][c]);
    for (auto& v : a[r]) v = field.mul(v, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const auto f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (a[r][j]) a[i][j] = field.sub(a[i][j], field.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix a, const PrimeField& field) { return rref(a, field).size(); }

/// Basis of {v : a v = 0}, one vector per free column in increasing order.
inline std::vector<Row> nullspace(Matrix a, std::size_t cols, const PrimeField& field) {
  auto pivots = rref(a, field);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Row> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = field.neg(a[r][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Polynomial coefficients (Q_0..Q_k) of a relation sum_i Q_i * rows[i] = 0
/// with deg Q_i <= cap, or nullopt if none exists at that cap. Among the
/// solutions the first nullspace vector is returned, scaled so the first
/// nonzero Q_i has leading coefficient 1.
inline std::optional<std::vector<UniPoly>> polynomial_relation(const std::vector<std::vector<UniPoly>>& rows,
                                                               std::size_t cap, const PrimeField& field) {
  const std::size_t k = rows.size();
  if (k == 0) return std::nullopt;
  const std::size_t width = rows[0].size();
  int max_deg = 0;
  for (auto& row : rows) {
    if (row.size() != width) fail(ErrorCode::DimMismatch, "rows of unequal length");
    for (auto& e : row) max_deg = std::max(max_deg, e.degree());
  }
  const std::size_t unknowns = k * (cap + 1);
  const std::size_t span = static_cast<std::size_t>(max_deg) + cap + 1;
  Matrix system;
  system.reserve(width * span);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t t = 0; t < span; ++t) {
      Row eq(unknowns, 0);
      bool any = false;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= cap && j <= t; ++j) {
          auto v = rows[i][c][t - j];
          if (v) {
            eq[i * (cap + 1) + j] = v;
            any = true;
          }
        }
      if (any) system.push_back(std::move(eq));
    }
  }
  auto basis = nullspace(std::move(system), unknowns, field);
  if (basis.empty()) return std::nullopt;
  const auto& sol = basis.front();
  std::vector<UniPoly> q;
  for (std::size_t i = 0; i < k; ++i)
    q.emplace_back(field, Row(sol.begin() + static_cast<std::ptrdiff_t>(i * (cap + 1)),
                              sol.begin() + static_cast<std::ptrdiff_t>((i + 1) * (cap + 1))));
  for (auto& qi : q)
    if (!qi.is_zero()) {
      const auto inv = field.inv(qi.leading());
      for (auto& qj : q) qj = qj.scaled(inv);
      break;
    }
  return q;
}

/// Nontrivial relation sum_i Q_i * rows[i] = 0 among r+1 polynomial rows of
/// length r whose entries have degree <= H, with every deg Q_i <= H*r. The
/// smallest cap admitting a relation is used.
inline std::vector<UniPoly> bounded_dependence(const std::vector<std::vector<UniPoly>>& rows, std::size_t H,
                                               const PrimeField& field) {
  if (rows.empty()) fail(ErrorCode::DimMismatch, "no rows");
  const std::size_t r = rows[0].size();
  if (rows.size() != r + 1) fail(ErrorCode::DimMismatch, "bounded_dependence needs r+1 rows of length r");
  for (auto& row : rows)
    for (auto& e : row)
      if (e.degree() > static_cast<int>(H)) fail(ErrorCode::Precondition, "row entry exceeds the degree cap");
  for (std::size_t cap = 0; cap <= H * r; ++cap)
    if (auto q = polynomial_relation(rows, cap, field)) return *q;
  fail(ErrorCode::Precondition, "no relation within degree H*r; rows violate the length precondition");
}

}  // namespace diagfp
