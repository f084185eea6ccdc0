#include <gtest/gtest.h>

#include <random>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

MultiPoly random_poly(const PrimeField& field, std::size_t nvars, int max_exp, int terms, std::mt19937& rng) {
  MultiPoly::Builder b(field, nvars);
  std::uniform_int_distribution<int> ex(0, max_exp);
  std::uniform_int_distribution<std::uint32_t> co(0, field.prime() - 1);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (std::size_t k = 0; k < nvars; ++k) m[k] = static_cast<std::uint32_t>(ex(rng));
    b.add(m, co(rng));
  }
  return std::move(b).build();
}

}  // namespace

TEST(Cartier, DecomposeThenReassembleIsIdentity) {
  std::mt19937 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int it = 0; it < 25; ++it) {
      auto g = random_poly(f, 3, 12, 20, rng);
      EXPECT_EQ(reassemble(frobenius_decompose(g)), g);
    }
  }
}

TEST(Cartier, ComponentsAgreeWithCartierPoly) {
  std::mt19937 rng(5);
  PrimeField f(3);
  auto g = random_poly(f, 2, 10, 15, rng);
  auto d = frobenius_decompose(g);
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b) EXPECT_EQ(d.component({a, b}), cartier_poly(g, {a, b}));
}

TEST(Cartier, SemilinearityWithPthPowers) {
  // Lambda_j(g^p h) = g Lambda_j(h) over F_p.
  std::mt19937 rng(9);
  PrimeField f(5);
  auto g = random_poly(f, 2, 3, 4, rng), h = random_poly(f, 2, 8, 10, rng);
  for (std::uint32_t j = 0; j < 5; ++j) EXPECT_EQ(cartier_poly(g.pow(5) * h, {j, 1}), g * cartier_poly(h, {j, 1}));
}

TEST(Cartier, SeriesOperatorMatchesPolynomialOperator) {
  PrimeField f(3);
  const auto r = parse_rational("1/(1-x-y-x*y)", 3);
  auto s = series_expand(r, 27);
  auto c = cartier_series(s, {1, 2});
  EXPECT_EQ(c.order(), 9u);
  for (std::size_t i = 0; i < c.order(); ++i)
    for (std::size_t j = 0; j < c.order(); ++j) {
      std::size_t e[2] = {i, j}, src[2] = {3 * i + 1, 3 * j + 2};
      EXPECT_EQ(c.stored(e), s.stored(src));
    }
}

TEST(Cartier, RejectsBadDigits) {
  auto g = parse_polynomial("1 + x*y", 3, 2);
  EXPECT_THROW(cartier_poly(g, {3, 0}), Error);
  EXPECT_THROW(cartier_poly(g, {0}), Error);
}

TEST(Cartier, FractionStaysInInvariantSpace) {
  // Lambda_j(S/Q) = Lambda_j(S Q^(p-1)) / Q, checked on the series.
  const auto r = parse_rational("(1+x)/(1-x*y-y^2-x)", 5);
  const auto st = initial_state(r);
  const std::size_t M = 50;
  auto s = series_expand(r, M);
  for (std::uint32_t i = 0; i < 5; ++i) {
    auto next = cartier_fraction(st, {i, i});
    EXPECT_LE(next.numerator.total_degree(), r.height());
    auto lhs = cartier_series(s, {i, i});
    auto rhs = series_expand(RationalFunction(next.numerator, r.denominator()), lhs.order());
    EXPECT_EQ(lhs.data(), rhs.data()) << "digit " << i;
  }
}

TEST(Cartier, OrbitIsClosedAndBounded) {
  const auto r = parse_rational("1/(1-x1) * 1/((1-x2)*(1-x3)*(1-x4)*(1-x5) - x1*x2*x3)", 5);
  auto orbit = diagonal_orbit(initial_state(r));
  EXPECT_GE(orbit.states.size(), 5u);
  for (auto& row : orbit.transitions) {
    ASSERT_EQ(row.size(), 5u);
    for (auto t : row) EXPECT_LT(t, orbit.states.size());
  }
  for (auto& s : orbit.states) EXPECT_LE(s.total_degree(), r.height());
}

TEST(Cartier, StateBudgetIsEnforced) {
  const auto r = parse_rational("1/(1-x1-x2-x3-x4-x5-x6)", 7);
  try {
    diagonal_orbit(initial_state(r), 1);
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StateBudget);
  }
}
