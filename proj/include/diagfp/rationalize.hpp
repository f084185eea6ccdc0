#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "diagfp/bounds.hpp"
#include "diagfp/diagonal.hpp"
#include "diagfp/resultant.hpp"
#include "diagfp/unipoly.hpp"

namespace diagfp {

/// Algebraic series f in F_p[[x]] given by P(x, Y) (x = variable 0,
/// Y = variable 1) together with a prefix of f selecting the root.
struct AlgebraicSeriesSpec {
  MultiPoly P;
  TruncatedSeries prefix;

  int degree() const { return P.degree_in(1); }
  /// Largest x-degree among the coefficients of the powers of Y.
  int height() const { return P.degree_in(0); }

  void validate() const;
};

namespace detail {

using Coeffs = std::vector<std::uint32_t>;

inline Coeffs series_inverse(const PrimeField& field, const Coeffs& a, std::size_t n) {
  if (a.empty() || a[0] == 0) fail(ErrorCode::Precondition, "series is not invertible");
  Coeffs b(n, 0);
  const auto inv0 = field.inv(a[0]);
  const std::uint64_t p = field.prime();
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t acc = k == 0 ? 1 : 0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) acc = (acc + (p - a[j]) * std::uint64_t{b[k - j]}) % p;
    b[k] = static_cast<std::uint32_t>(acc * inv0 % p);
  }
  return b;
}

// P(x, g) mod x^n by Horner in Y; P given by its Y-coefficients.
inline Coeffs evaluate_at_series(const PrimeField& field, const std::vector<MultiPoly>& ycoef, const Coeffs& g,
                                 std::size_t n) {
  Coeffs acc(n, 0);
  for (std::size_t k = ycoef.size(); k-- > 0;) {
    acc = mul_trunc(field, acc, g, n);
    for (auto& [m, c] : ycoef[k].terms())
      if (m[0] < n) acc[m[0]] = field.add(acc[m[0]], c);
  }
  return acc;
}

inline Coeffs prefix_of(const TruncatedSeries& s) {
  if (s.nvars() != 1) fail(ErrorCode::DimMismatch, "expected a univariate series");
  for (auto v : s.shift())
    if (v != 0) fail(ErrorCode::Precondition, "series prefix must not carry a monomial shift");
  return s.coefficients();
}

}  // namespace detail

inline void AlgebraicSeriesSpec::validate() const {
  if (P.nvars() != 2) fail(ErrorCode::DimMismatch, "defining polynomial must be in (x, Y)");
  if (P.is_zero()) fail(ErrorCode::ZeroInput, "defining polynomial is zero");
  if (prefix.field() != P.field()) fail(ErrorCode::BadPrime, "prefix and polynomial use different primes");
  const auto f = detail::prefix_of(prefix);
  auto residue = detail::evaluate_at_series(P.field(), coefficients_in(P, 1), f, f.size());
  for (std::size_t n = 0; n < residue.size(); ++n)
    if (residue[n])
      fail(ErrorCode::Precondition, "prefix does not satisfy P(x, f) = 0 (coefficient " + std::to_string(n) + ")");
}

/// Order at x = 0 of Res_Y(P, dP/dY).
inline std::size_t resultant_order(const MultiPoly& P) {
  if (P.nvars() != 2) fail(ErrorCode::DimMismatch, "defining polynomial must be in (x, Y)");
  const auto dP = P.derivative(1);
  if (dP.is_zero()) fail(ErrorCode::Inseparable, "dP/dY vanishes identically; take p-th roots first");
  const auto res = resultant_wrt_last(P, dP);
  if (res.is_zero()) fail(ErrorCode::ResultantZero, "P is not squarefree in Y; remove repeated factors first");
  return static_cast<std::size_t>(res.min_degree_in(0));
}

/// Unique root g of P1 with g(0) = 0, given dP1/dY(0,0) != 0, to order n
/// (Newton iteration with doubling precision).
inline std::vector<std::uint32_t> hensel_lift(const MultiPoly& P1, std::size_t n) {
  const auto& field = P1.field();
  const auto ycoef = coefficients_in(P1, 1);
  std::vector<MultiPoly> dcoef;
  for (std::size_t k = 1; k < ycoef.size(); ++k) dcoef.push_back(ycoef[k].scaled(field.reduce(static_cast<std::int64_t>(k))));
  detail::Coeffs g(1, 0);
  std::size_t prec = 1;
  while (prec < n) {
    prec = std::min(2 * prec, n);
    g.resize(prec, 0);
    auto val = detail::evaluate_at_series(field, ycoef, g, prec);
    auto der = detail::evaluate_at_series(field, dcoef, g, prec);
    auto step = mul_trunc(field, val, detail::series_inverse(field, der, prec), prec);
    for (std::size_t k = 0; k < prec; ++k) g[k] = field.sub(g[k], step[k]);
  }
  g.resize(n, 0);
  return g;
}

/// f = Q(x) + x^i g(x) with i = ord_0 Res_Y(P, dP/dY), deg Q <= i, g(0) = 0,
/// and P1(x, Y) = P(x, Q + x^i Y) / x^c (c its x-content) vanishing at g.
struct ShiftDecomposition {
  UniPoly poly_part;
  std::size_t shift = 0;
  TruncatedSeries tail;
  MultiPoly tail_poly;
};

/// `tail_order` (if larger than what the prefix supplies) extends the tail by
/// Hensel lifting.
inline ShiftDecomposition shift_decompose(const AlgebraicSeriesSpec& spec, std::size_t tail_order = 0) {
  spec.validate();
  const auto& field = spec.P.field();
  const std::size_t i = resultant_order(spec.P);
  const auto f = detail::prefix_of(spec.prefix);
  if (f.size() <= i)
    fail(ErrorCode::InsufficientPrecision, "prefix has " + std::to_string(f.size()) + " terms; the shift needs " +
                                               std::to_string(i + 1));
  ShiftDecomposition out{UniPoly(field, detail::Coeffs(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i + 1))), i,
                         TruncatedSeries(field, 1, 1), MultiPoly(field, 2)};
  // Q + x^i Y
  auto subst = out.poly_part.to_multipoly(2, 0) + MultiPoly::variable(field, 2, 1).shifted([&] {
    Monomial m;
    m[0] = static_cast<std::uint32_t>(i);
    return m;
  }());
  auto P1 = spec.P.substitute(1, subst);
  if (P1.is_zero()) fail(ErrorCode::Precondition, "P vanishes identically after the shift");
  Monomial content;
  content[0] = P1.monomial_content()[0];
  P1 = P1.divided_by_monomial(content);
  Monomial y;
  y[1] = 1;
  if (P1.constant_term() != 0 || P1.coefficient(y) == 0)
    fail(ErrorCode::Precondition, "shifted tail polynomial does not satisfy dP1/dY(0,0) != 0");
  out.tail_poly = P1;

  detail::Coeffs known(f.begin() + static_cast<std::ptrdiff_t>(i), f.end());
  known[0] = 0;
  const std::size_t n = std::max(known.size(), tail_order);
  auto g = hensel_lift(P1, n);
  for (std::size_t k = 0; k < known.size(); ++k)
    if (g[k] != known[k])
      fail(ErrorCode::Precondition, "prefix disagrees with the Hensel root at tail index " + std::to_string(k));
  out.tail = TruncatedSeries::univariate(field, std::move(g));
  return out;
}

/// R(x, y) = y^2 dP/dY(xy, y) / P(xy, y), with Delta(R) = g. When
/// `verify_order` > 0 the diagonal is checked against g to that order.
inline RationalFunction furstenberg(const MultiPoly& P1, const TruncatedSeries& g, std::size_t verify_order = 0) {
  if (P1.nvars() != 2) fail(ErrorCode::DimMismatch, "tail polynomial must be in (x, Y)");
  const auto gc = detail::prefix_of(g);
  Monomial y;
  y[1] = 1;
  if (!gc.empty() && gc[0] != 0) fail(ErrorCode::Precondition, "tail series must vanish at 0");
  if (P1.constant_term() != 0) fail(ErrorCode::Precondition, "P1(0,0) must vanish");
  if (P1.coefficient(y) == 0) fail(ErrorCode::Precondition, "dP1/dY(0,0) vanishes");
  // x^a Y^b -> x^a y^(a+b)
  auto twist = [](const MultiPoly& f) {
    return f.map_exponents(2, [](const Monomial& m) {
      Monomial e;
      e[0] = m[0];
      e[1] = m[0] + m[1];
      return e;
    });
  };
  auto num = twist(P1.derivative(1)).shifted(y).shifted(y);
  auto den = twist(P1);
  RationalFunction R(std::move(num), std::move(den));
  if (verify_order) {
    if (gc.size() < verify_order) fail(ErrorCode::InsufficientPrecision, "tail series shorter than the check order");
    auto d = diagonal_full(series_expand(R, verify_order), verify_order);
    for (std::size_t n = 0; n < verify_order; ++n)
      if (d[n] != gc[n]) fail(ErrorCode::Precondition, "diagonal mismatch at index " + std::to_string(n));
  }
  return R;
}

struct RationalizationCertificate {
  BoundValue height_budget;  // N(1, d, h)
  int height_actual = 0;
  std::size_t verified_to_order = 0;
  std::size_t shift = 0;
  std::vector<std::uint32_t> poly_part;  // Q, lowest degree first
};

struct Rationalization {
  RationalFunction R;
  RationalizationCertificate certificate;
};

/// R(x, y) = Q(xy) + (xy)^i T(x, y) with T from the tail, certified by
/// matching Delta(R) against f to order m_check and height(R) <= N(1, d, h).
inline Rationalization rationalize_univariate(const AlgebraicSeriesSpec& spec, std::size_t m_check) {
  if (m_check == 0) fail(ErrorCode::Precondition, "check order must be positive");
  auto sd = shift_decompose(spec, m_check);
  const auto& field = spec.P.field();
  auto T = furstenberg(sd.tail_poly, sd.tail);

  Monomial xy;
  xy[0] = xy[1] = static_cast<std::uint32_t>(sd.shift);
  auto q_xy = sd.poly_part.to_multipoly(2, 0).map_exponents(2, [](const Monomial& m) {
    Monomial e;
    e[0] = e[1] = m[0];
    return e;
  });
  auto num = q_xy * T.denominator() + T.numerator().shifted(xy);
  RationalFunction R(std::move(num), T.denominator());

  // Target: f = Q + x^i g to m_check terms.
  std::vector<std::uint32_t> target(m_check, 0);
  for (std::size_t k = 0; k < m_check; ++k) {
    std::uint32_t v = sd.poly_part[k];
    if (k >= sd.shift) v = field.add(v, sd.tail[k - sd.shift]);
    target[k] = v;
  }
  auto diag = diagonal_full(series_expand(R, m_check), m_check);
  for (std::size_t n = 0; n < m_check; ++n)
    if (diag[n] != target[n])
      fail(ErrorCode::CertFail, "diagonal of the rationalization differs from f at index " + std::to_string(n));

  RationalizationCertificate cert;
  cert.height_budget = rationalization_height(static_cast<std::uint64_t>(std::max(spec.degree(), 1)),
                                              static_cast<std::uint64_t>(std::max(spec.height(), 1)));
  cert.height_actual = R.height();
  cert.verified_to_order = m_check;
  cert.shift = sd.shift;
  cert.poly_part = sd.poly_part.coeffs();
  if (mpz_class(cert.height_actual) > cert.height_budget.exact())
    fail(ErrorCode::CertFail, "rationalization height " + std::to_string(cert.height_actual) + " exceeds N(1,d,h)");
  return {std::move(R), std::move(cert)};
}

}  // namespace diagfp
