#include <gtest/gtest.h>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

// Equal up to a nonzero scalar.
bool proportional(const std::vector<UniPoly>& a, const std::vector<UniPoly>& b, const PrimeField& f) {
  if (a.size() != b.size()) return false;
  std::uint32_t ratio = 0;
  for (std::size_t i = 0; i < a.size() && !ratio; ++i)
    if (!a[i].is_zero()) {
      if (b[i].is_zero()) return false;
      ratio = f.mul(b[i].leading(), f.inv(a[i].leading()));
    }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].scaled(ratio) != b[i]) return false;
  return true;
}

// (1-4x)^((p-1)/2) Y^p - Y, the Ore form of (1-4x) g^2 = 1.
std::vector<UniPoly> central_binomial_ore(std::uint32_t p) {
  PrimeField f(p);
  UniPoly base(f, {1, f.reduce(-4)}), acc = UniPoly::constant(f, 1);
  for (std::uint32_t k = 0; k < (p - 1) / 2; ++k) acc = acc * base;
  return {UniPoly::constant(f, -1), acc};
}

}  // namespace

TEST(Annihilator, CentralBinomialMatchesKnownRelation) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const auto rf = parse_rational("1/(1-x-y)", p);
    AnnihilatorOptions opts;
    opts.verify_order = 1000;
    auto a = find_annihilator(rf, opts);
    EXPECT_TRUE(a.verified);
    EXPECT_GE(a.verified_to_order, 1000u);
    EXPECT_EQ(a.r(), 1u);
    EXPECT_TRUE(proportional(a.coefficients, central_binomial_ore(p), PrimeField(p))) << "p=" << p;
  }
}

TEST(Annihilator, KnownRelationVerifiesAgainstDiagonal) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    OreAnnihilator a;
    a.p = p;
    a.coefficients = central_binomial_ore(p);
    auto g = diagonal_prefix(synthesize_dfao(parse_rational("1/(1-x-y)", p)), 2000);
    EXPECT_TRUE(verify_annihilator(a, g, 2000).pass);
    a.coefficients[1] = a.coefficients[1] + UniPoly::monomial(PrimeField(p), 3);
    auto bad = verify_annihilator(a, g, 2000);
    EXPECT_FALSE(bad.pass);
    EXPECT_GE(bad.residue_order, 3u);
  }
}

TEST(Annihilator, KernelRecursionHolds) {
  // v(x) = A(x) v(x^p) on the truncated basis.
  const std::uint32_t p = 5;
  auto kb = kernel_basis(parse_rational("(1+x)/(1-x*y-y^2-x)", p));
  ASSERT_EQ(kb.rank(), 3u);
  PrimeField f(p);
  const std::size_t M = kb.precision;
  for (std::size_t i = 0; i < kb.rank(); ++i) {
    std::vector<std::uint32_t> rhs(M, 0);
    for (std::size_t j = 0; j < kb.rank(); ++j) {
      auto gj = frobenius_dilate(kb.basis[j].coefficients(), p, M);
      auto prod = mul_trunc(f, kb.A[i][j].coeffs(), gj, M);
      for (std::size_t n = 0; n < M; ++n) rhs[n] = f.add(rhs[n], prod[n]);
    }
    EXPECT_EQ(rhs, kb.basis[i].coefficients()) << "row " << i;
    for (std::size_t j = 0; j < kb.rank(); ++j) EXPECT_LE(kb.A[i][j].degree(), static_cast<int>(p) - 1);
  }
}

TEST(Annihilator, HigherRankCaseRespectsCaps) {
  const std::uint32_t p = 5;
  auto a = find_annihilator(parse_rational("(1+x)/(1-x*y-y^2-x)", p));
  EXPECT_TRUE(a.verified);
  EXPECT_EQ(a.r(), 3u);
  EXPECT_LE(mpz_class(a.max_degree()), a.height_bound);
  auto g = diagonal_prefix(synthesize_dfao(parse_rational("(1+x)/(1-x*y-y^2-x)", p)), 5000);
  EXPECT_TRUE(verify_annihilator(a, g, 5000).pass);
}

TEST(Annihilator, SingularKernelMatrix) {
  // Delta(x/(1-y)) = x: the kernel basis (x, 1) gives a singular A(x).
  for (std::uint32_t p : {2u, 3u, 7u}) {
    auto a = find_annihilator(parse_rational("x/(1-y)", p));
    EXPECT_TRUE(a.verified);
    EXPECT_GE(a.r(), 1u);
    EXPECT_LE(a.r(), 2u);
    auto g = TruncatedSeries::univariate(PrimeField(p), {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_TRUE(verify_annihilator(a, g, 16).pass);
  }
}

TEST(Annihilator, ZeroDiagonal) {
  auto a = find_annihilator(parse_rational("x/(1-x)", 3, 2));
  EXPECT_TRUE(a.verified);
  EXPECT_EQ(a.r(), 1u);
  EXPECT_TRUE(a.coefficients[1].is_zero());
}

TEST(Annihilator, VerifyNeedsEnoughTerms) {
  OreAnnihilator a;
  a.p = 3;
  a.coefficients = central_binomial_ore(3);
  auto g = TruncatedSeries::univariate(PrimeField(3), {1, 2, 0});
  try {
    verify_annihilator(a, g, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientPrecision);
  }
}

TEST(Annihilator, StateSequencesMatchEvaluate) {
  auto d = synthesize_dfao(parse_rational("1/(1-x1) * 1/((1-x2)*(1-x3)*(1-x4)*(1-x5) - x1*x2*x3)", 7));
  auto pre = diagonal_prefix(d, 500);
  for (std::size_t n = 0; n < 500; ++n) EXPECT_EQ(pre[n], evaluate(d, n));
}
