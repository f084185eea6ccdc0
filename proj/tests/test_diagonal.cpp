#include <gtest/gtest.h>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

TEST(Diagonal, CentralBinomialMatchesLucas) {
  // C(2n, n) mod p via digits: product of C(2 d_i, d_i) with carries giving 0.
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto d = diagonal_full(series_expand(parse_rational("1/(1-x-y)", p), 60), 60);
    mpz_class c = 1;
    for (std::size_t n = 0; n < 60; ++n) {
      if (n) c = c * (4 * n - 2) / n;
      EXPECT_EQ(d[n], mpz_class(c % p).get_ui()) << "p=" << p << " n=" << n;
    }
  }
}

TEST(Diagonal, HalfDiagonalPairsVariables) {
  // Delta_1/2 of 1/((1-x1-x3)(1-x2-x4)) is 1/((1-4 y1)(1-4 y2))^(1/2)-type: C(2i,i)C(2j,j).
  const std::uint32_t p = 11;
  auto s = series_expand(parse_rational("1/((1-x1-x3)*(1-x2-x4))", p), 12);
  auto h = diagonal_half(s, 12);
  ASSERT_EQ(h.nvars(), 2u);
  auto cb = diagonal_full(series_expand(parse_rational("1/(1-x-y)", p), 12), 12);
  PrimeField f(p);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      std::size_t e[2] = {i, j};
      EXPECT_EQ(h.stored(e), f.mul(cb[i], cb[j]));
    }
}

TEST(Diagonal, LastPairMergesFinalVariables) {
  const std::uint32_t p = 13;
  auto s = series_expand(parse_rational("1/(1-x1-x2-x3)", p), 10);
  auto lp = diagonal_last_pair(s, 10);
  ASSERT_EQ(lp.nvars(), 2u);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      std::size_t e[2] = {i, j}, src[3] = {i, j, j};
      EXPECT_EQ(lp.stored(e), s.stored(src));
    }
}

TEST(Diagonal, ShiftIsCarriedThrough) {
  PrimeField f(5);
  auto s = series_expand(parse_rational("1/(1-x-y)", 5), 8);
  s.set_shift({1, 0});  // x * 1/(1-x-y)
  auto d = diagonal_full(s, 6);
  EXPECT_EQ(d.shift(), std::vector<std::int64_t>{1});
  // coefficient of (xy)^(n+1) is C(2n+1, n)
  for (std::size_t n = 0; n < 6; ++n) {
    std::size_t src[2] = {n, n + 1};
    EXPECT_EQ(d[n], s.stored(src));
  }
}

TEST(Diagonal, PrecisionAndShapeErrors) {
  auto s = series_expand(parse_rational("1/(1-x-y-z)", 5), 4);
  EXPECT_THROW(diagonal_full(s, 5), Error);
  EXPECT_THROW(diagonal_half(s, 2), Error);
  try {
    DiagonalSpec{DiagonalMode::Half, 3}.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
}

TEST(Diagonal, ValuationOfLastVariable) {
  auto s = series_expand(parse_rational("x2^2/(1-x1)", 3), 6);
  EXPECT_EQ(nu_last(s), 2);
  s.set_shift({0, 3});
  EXPECT_EQ(nu_last(s), 5);
  EXPECT_EQ(nu_last(parse_polynomial("x1*x2^3 + x2^4", 3, 2)), 3);
  auto z = series_expand(parse_rational("0", 3, 2), 4);
  EXPECT_THROW(nu_last(z), Error);
}
