#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diagfp/automaton.hpp"
#include "diagfp/linalg.hpp"
#include "diagfp/resultant.hpp"

namespace diagfp {

/// Basis g_1 = Delta(R), g_2, ..., g_r of the span of the diagonal kernel,
/// with v(x) = A(x) v(x^p) for v = (g_1, ..., g_r)^T.
struct KernelBasis {
  std::uint32_t p = 2;
  std::vector<TruncatedSeries> basis;        // truncated to `precision` terms
  std::vector<std::size_t> states;           // orbit state behind each g_j
  std::vector<std::vector<UniPoly>> A;       // r x r, entries of degree <= p-1
  std::size_t precision = 0;
  std::size_t orbit_size = 0;

  std::size_t rank() const noexcept { return basis.size(); }
};

namespace detail {

// coef[s][n] = n-th coefficient of the diagonal of state s, for n < count:
// a_s(0) = S(0) and a_s(pn + i) = a_{delta(s,i)}(n).
inline std::vector<std::vector<std::uint32_t>> state_sequences(const Dfao& d, std::size_t count) {
  std::vector<std::vector<std::uint32_t>> coef(d.size(), std::vector<std::uint32_t>(count, 0));
  for (std::size_t s = 0; s < d.size(); ++s)
    if (count) coef[s][0] = d.output[s];
  for (std::size_t n = 1; n < count; ++n)
    for (std::size_t s = 0; s < d.size(); ++s) coef[s][n] = coef[d.transitions[s][n % d.p]][n / d.p];
  return coef;
}

// Incrementally maintained echelon basis; insert() reports whether the vector
// enlarged the span.
class EchelonSpan {
 public:
  explicit EchelonSpan(const PrimeField& field) : field_(field) {}

  bool insert(Row v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto c = v[pivots_[i]];
      if (!c) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (rows_[i][j]) v[j] = field_.sub(v[j], field_.mul(c, rows_[i][j]));
    }
    std::size_t piv = 0;
    while (piv < v.size() && v[piv] == 0) ++piv;
    if (piv == v.size()) return false;
    const auto inv = field_.inv(v[piv]);
    for (auto& x : v) x = field_.mul(x, inv);
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  std::size_t dim() const noexcept { return rows_.size(); }

 private:
  PrimeField field_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

// Exact dimension of span{a_s : s a state}: the dual span of the output
// vector closed under (T_i o)[s] = o[delta(s, i)].
inline std::size_t exact_kernel_rank(const Dfao& d) {
  PrimeField field(d.p);
  EchelonSpan span(field);
  std::vector<Row> todo{Row(d.output.begin(), d.output.end())};
  if (!span.insert(todo.back())) return 0;
  while (!todo.empty()) {
    auto o = std::move(todo.back());
    todo.pop_back();
    for (std::uint32_t i = 0; i < d.p; ++i) {
      Row next(d.size());
      for (std::size_t s = 0; s < d.size(); ++s) next[s] = o[d.transitions[s][i]];
      if (span.insert(next)) todo.push_back(std::move(next));
    }
  }
  return span.dim();
}

}  // namespace detail

inline constexpr std::size_t kDefaultRankPrecision = 256;

/// Kernel basis of Delta(R) from the diagonal orbit. The truncated rank is
/// required to agree at M_r, at 2 M_r, and with the exact rank of the
/// automaton's dual closure.
inline KernelBasis kernel_basis(const RationalFunction& r, std::size_t rank_precision = kDefaultRankPrecision,
                                std::size_t max_states = kDefaultMaxStates) {
  if (rank_precision == 0) fail(ErrorCode::Precondition, "rank precision must be positive");
  const auto field = r.field();
  const auto p = field.prime();
  auto orbit = diagonal_orbit(initial_state(r), max_states);
  const auto d = dfao_from_orbit(orbit);
  const std::size_t big = 2 * rank_precision;
  const auto coef = detail::state_sequences(d, big);

  auto truncated_rank = [&](std::size_t count) {
    Matrix m;
    for (auto& row : coef) m.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(count));
    return rank(std::move(m), field);
  };
  const auto rank_small = truncated_rank(rank_precision);
  const auto rank_big = truncated_rank(big);
  if (rank_small != rank_big)
    fail(ErrorCode::RankUnstable, "kernel rank " + std::to_string(rank_small) + " at precision " +
                                      std::to_string(rank_precision) + " but " + std::to_string(rank_big) + " at " +
                                      std::to_string(big));
  const auto exact = detail::exact_kernel_rank(d);
  if (exact != rank_big)
    fail(ErrorCode::RankUnstable, "truncated kernel rank " + std::to_string(rank_big) + " below the exact rank " +
                                      std::to_string(exact) + "; raise the rank precision");

  KernelBasis kb;
  kb.p = p;
  kb.precision = big;
  kb.orbit_size = d.size();
  // Greedy selection in orbit order keeps g_1 = Delta(R) first.
  detail::EchelonSpan span(field);
  for (std::size_t s = 0; s < d.size() && span.dim() < exact; ++s)
    if (span.insert(coef[s])) kb.states.push_back(s);
  for (auto s : kb.states) kb.basis.push_back(TruncatedSeries::univariate(field, coef[s]));
  const std::size_t rk = kb.states.size();
  if (rk == 0) return kb;

  // Coordinates of a_t in the basis: solve B^T c = a_t on the truncation.
  auto coordinates = [&](std::size_t t) {
    Matrix sys(big, Row(rk + 1, 0));
    for (std::size_t n = 0; n < big; ++n) {
      for (std::size_t k = 0; k < rk; ++k) sys[n][k] = coef[kb.states[k]][n];
      sys[n][rk] = coef[t][n];
    }
    auto piv = rref(sys, field);
    if (!piv.empty() && piv.back() == rk) fail(ErrorCode::RankUnstable, "kernel image outside the selected basis");
    Row c(rk, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) c[piv[i]] = sys[i][rk];
    return c;
  };
  kb.A.assign(rk, std::vector<UniPoly>(rk, UniPoly(field)));
  for (std::size_t j = 0; j < rk; ++j) {
    std::vector<Row> entries(rk, Row(p, 0));
    for (std::uint32_t i = 0; i < p; ++i) {
      auto c = coordinates(d.transitions[kb.states[j]][i]);
      for (std::size_t k = 0; k < rk; ++k) entries[k][i] = c[k];
    }
    for (std::size_t k = 0; k < rk; ++k) kb.A[j][k] = UniPoly(field, entries[k]);
  }
  return kb;
}

/// Sum_i Q_i(x) Y^(p^i) annihilating a diagonal.
struct OreAnnihilator {
  std::uint32_t p = 2;
  std::vector<UniPoly> coefficients;  // Q_0 .. Q_r
  mpz_class degree_bound;             // p^r
  mpz_class height_bound;             // r^2 p^(r+1)
  std::size_t verified_to_order = 0;
  bool verified = false;

  std::size_t r() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  int max_degree() const {
    int m = 0;
    for (auto& q : coefficients) m = std::max(m, q.degree());
    return m;
  }
};

struct AnnihilatorOptions {
  std::size_t rank_precision = kDefaultRankPrecision;
  std::size_t verify_order = 0;  // 0: 4 (r+1)(max deg Q_i + 1)
  std::size_t max_states = kDefaultMaxStates;
};

struct VerifyResult {
  bool pass = true;
  std::size_t residue_order = 0;  // first nonzero coefficient when !pass
};

/// Checks Sum Q_i g^(p^i) = 0 below the annihilator's verification order
/// (or below g's order when none is recorded yet).
inline VerifyResult verify_annihilator(const OreAnnihilator& a, const TruncatedSeries& g, std::size_t order = 0) {
  if (g.nvars() != 1) fail(ErrorCode::DimMismatch, "annihilator verification needs a univariate series");
  if (g.field().prime() != a.p) fail(ErrorCode::BadPrime, "series and annihilator use different primes");
  if (order == 0) order = a.verified_to_order ? a.verified_to_order : g.order();
  if (g.order() < order)
    fail(ErrorCode::InsufficientPrecision, "series has " + std::to_string(g.order()) + " terms, verification needs " +
                                               std::to_string(order));
  const auto coeffs = g.coefficients();
  std::vector<std::uint64_t> acc(order, 0);
  const std::uint64_t p = a.p;
  std::uint64_t ppow = 1;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    const auto& q = a.coefficients[i];
    for (std::size_t n = 0; n * ppow < order && n < coeffs.size(); ++n) {
      if (!coeffs[n]) continue;
      const std::size_t base = n * ppow;
      for (std::size_t t = 0; t < q.coeffs().size() && base + t < order; ++t)
        if (q.coeffs()[t]) acc[base + t] = (acc[base + t] + std::uint64_t{q.coeffs()[t]} * coeffs[n]) % p;
    }
    ppow = std::min<std::uint64_t>(ppow * p, order + 1);  // beyond the box only n = 0 matters
  }
  for (std::size_t n = 0; n < order; ++n)
    if (acc[n]) return {false, n};
  return {true, 0};
}

namespace detail {

using PolyMatrix = std::vector<std::vector<UniPoly>>;

inline UniPoly poly_det(const PolyMatrix& a, const PrimeField& field) {
  const std::size_t n = a.size();
  if (n == 0) return UniPoly::constant(field, 1);
  std::vector<std::vector<MultiPoly>> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& e : a[i]) m[i].push_back(e.to_multipoly(1, 0));
  return UniPoly::from_multipoly(bareiss_determinant(std::move(m), field, 1), 0);
}

inline PolyMatrix adjugate(const PolyMatrix& a, const PrimeField& field) {
  const std::size_t n = a.size();
  PolyMatrix adj(n, std::vector<UniPoly>(n, UniPoly(field)));
  if (n == 1) {
    adj[0][0] = UniPoly::constant(field, 1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PolyMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<UniPoly> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      auto c = poly_det(minor, field);
      adj[i][j] = (i + j) % 2 ? -c : c;
    }
  return adj;
}

inline mpz_class pow_mpz(std::uint64_t base, std::uint64_t e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

// Smallest-cap relation among rows, searching caps up to `max_cap`.
inline std::optional<std::vector<UniPoly>> minimal_relation(const std::vector<std::vector<UniPoly>>& rows,
                                                            std::size_t max_cap, const PrimeField& field) {
  if (!polynomial_relation(rows, max_cap, field)) return std::nullopt;
  std::size_t lo = 0, hi = max_cap;  // relation exists at hi
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (polynomial_relation(rows, mid, field)) hi = mid;
    else lo = mid + 1;
  }
  return polynomial_relation(rows, hi, field);
}

}  // namespace detail

/// First `count` coefficients of the automatic sequence, by coefficient walk over all states.
inline TruncatedSeries diagonal_prefix(const Dfao& d, std::size_t count) {
  auto coef = detail::state_sequences(d, count);
  return TruncatedSeries::univariate(PrimeField(d.p), coef[d.initial]);
}

/// Ore-form annihilator of Delta(R) built from A(x)^{-1} = adj(A)/det(A):
/// rows e_1^T adj(A)(x^(p^(k-1))) ... adj(A)(x) are tested for the first
/// polynomial dependence, denominators prod det A(x^(p^i)) are cleared, and
/// the result is verified against the exact coefficient sequence. A singular
/// A(x) falls back to the forward products A(x^(p^k)) ... A(x^(p^(t-1))).
inline OreAnnihilator find_annihilator(const RationalFunction& rf, const AnnihilatorOptions& opts = {}) {
  const auto field = rf.field();
  const std::uint64_t p = field.prime();
  auto kb = kernel_basis(rf, opts.rank_precision, opts.max_states);
  const std::size_t rk = kb.rank();
  OreAnnihilator out;
  out.p = field.prime();
  auto dfao = synthesize_dfao(rf, opts.max_states);

  if (rk == 0) {  // Delta(R) = 0
    out.coefficients = {UniPoly::constant(field, 1), UniPoly(field)};
  } else {
    const auto det = detail::poly_det(kb.A, field);
    std::vector<UniPoly> dens;
    std::optional<std::vector<UniPoly>> rel;
    auto max_entry_degree = [](const std::vector<std::vector<UniPoly>>& rows) {
      std::size_t H = 0;
      for (auto& rw : rows)
        for (auto& e : rw) H = std::max<std::size_t>(H, static_cast<std::size_t>(std::max(e.degree(), 0)));
      return H;
    };
    if (!det.is_zero()) {
      const auto adj = detail::adjugate(kb.A, field);
      std::vector<std::vector<UniPoly>> rows;
      std::vector<UniPoly> row(rk, UniPoly(field));
      row[0] = UniPoly::constant(field, 1);
      rows.push_back(row);
      dens.push_back(UniPoly::constant(field, 1));
      for (std::size_t k = 1; k <= rk && !rel; ++k) {
        // e_1^T B(x^(p^(k-1))) ... B(x) = row_{k-1}(x^p) B(x), with B = adj(A)/det(A).
        std::vector<UniPoly> next(rk, UniPoly(field));
        for (std::size_t c = 0; c < rk; ++c)
          for (std::size_t j = 0; j < rk; ++j)
            if (!rows.back()[j].is_zero()) next[c] = next[c] + rows.back()[j].dilated(p) * adj[j][c];
        dens.push_back(dens.back().dilated(p) * det);
        rows.push_back(std::move(next));
        rel = detail::minimal_relation(rows, max_entry_degree(rows) * std::min(rows.size() - 1, rk), field);
      }
    } else {
      // Singular A: g(x^(p^k)) = e_1^T M_k v(x^(p^t)) with M_k = A(x^(p^k)) ... A(x^(p^(t-1))), t the top level.
      for (std::size_t top = 1; top <= rk && !rel; ++top) {
        std::vector<std::vector<UniPoly>> M(rk, std::vector<UniPoly>(rk, UniPoly(field)));
        for (std::size_t i = 0; i < rk; ++i) M[i][i] = UniPoly::constant(field, 1);
        std::vector<std::vector<UniPoly>> rows(top + 1);
        rows[top] = M[0];
        for (std::size_t k = top; k-- > 0;) {
          const auto scale = static_cast<std::size_t>(detail::pow_mpz(p, k).get_ui());
          std::vector<std::vector<UniPoly>> next(rk, std::vector<UniPoly>(rk, UniPoly(field)));
          for (std::size_t i = 0; i < rk; ++i)
            for (std::size_t j = 0; j < rk; ++j) {
              if (kb.A[i][j].is_zero()) continue;
              const auto a = kb.A[i][j].dilated(scale);
              for (std::size_t c = 0; c < rk; ++c)
                if (!M[j][c].is_zero()) next[i][c] = next[i][c] + a * M[j][c];
            }
          M = std::move(next);
          rows[k] = M[0];
        }
        rel = detail::minimal_relation(rows, max_entry_degree(rows) * top, field);
      }
      if (rel) dens.assign(rel->size(), UniPoly::constant(field, 1));
    }
    if (!rel) fail(ErrorCode::VerifyFail, "no polynomial dependence among the r+1 kernel rows");
    std::vector<UniPoly> q;
    for (std::size_t k = 0; k < rel->size(); ++k) q.push_back((*rel)[k] * dens[k]);
    UniPoly g(field);
    for (auto& qi : q) g = gcd(g, qi);
    if (g.degree() > 0)
      for (auto& qi : q) qi = qi.divmod(g).first;
    for (auto it = q.rbegin(); it != q.rend(); ++it)
      if (!it->is_zero()) {
        const auto inv = field.inv(it->leading());
        for (auto& qi : q) qi = qi.scaled(inv);
        break;
      }
    out.coefficients = std::move(q);
  }

  const std::size_t r = out.r();
  out.degree_bound = detail::pow_mpz(p, r);
  out.height_bound = mpz_class(static_cast<unsigned long>(r * r)) * detail::pow_mpz(p, r + 1);
  for (auto& qi : out.coefficients)
    if (qi.degree() > 0 && mpz_class(static_cast<unsigned long>(qi.degree())) > out.height_bound)
      fail(ErrorCode::VerifyFail, "annihilator coefficient degree exceeds r^2 p^(r+1)");

  std::size_t mv = opts.verify_order;
  const std::size_t auto_mv = 4 * (r + 1) * (static_cast<std::size_t>(out.max_degree()) + 1);
  if (mv < auto_mv) mv = auto_mv;
  auto g = diagonal_prefix(dfao, mv);
  auto check = verify_annihilator(out, g, mv);
  if (!check.pass)
    fail(ErrorCode::VerifyFail, "annihilator residue is nonzero at order " + std::to_string(check.residue_order));
  out.verified_to_order = mv;
  out.verified = true;
  return out;
}

}  // namespace diagfp
