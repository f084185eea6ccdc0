#include <gtest/gtest.h>

#include <cmath>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

BoundValue N(std::uint64_t n, std::uint64_t d, std::uint64_t h, std::size_t budget = kDefaultBitBudget) {
  BoundContext ctx(BoundMode::Exact, budget);
  return bound_rationalization(n, d, h, ctx).get("N");
}

// log2 of the tower's value when it fits a double.
double tower_log2(const Tower& t) {
  if (t.level == 0) return std::log2(t.top);
  if (t.level == 1) return t.top;
  return INFINITY;
}

// a <= b for certified upper bounds (exact values compared exactly).
bool bound_le(const BoundValue& a, const BoundValue& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() <= b.exact();
  auto [x, y] = detail::align(a.upper(), b.upper());
  return x.top <= y.top;
}

}  // namespace

TEST(Bounds, RationalizationHeightValues) {
  EXPECT_EQ(N(1, 1, 1).exact(), 8);
  EXPECT_EQ(N(1, 2, 3).exact(), 109);
  EXPECT_EQ(rationalization_height(2, 3).exact(), 109);
}

TEST(Bounds, FinalBoundBinomial) {
  BoundContext ctx;
  auto rep = bound_final(1, 2, 3, 5, ctx);
  EXPECT_EQ(rep.get("A").exact(), 6105);
  EXPECT_NEAR(rep.get("degreeCap").log2_upper(), 6105 * std::log2(5.0), 1e-6);
}

TEST(Bounds, TwoLevelIntermediates) {
  BoundContext ctx;
  auto rep = bound_rationalization(2, 2, 2, ctx);
  // d0 = d^(2^(hd(2d-1)) - 1) = 2^(2^12 - 1)
  const auto& d0 = rep.get("d0[n=2]");
  ASSERT_TRUE(d0.is_exact());
  EXPECT_EQ(mpz_sizeinbase(d0.exact().get_mpz_t(), 2), 4096u);
  EXPECT_FALSE(rep.get("N").is_exact());
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(Bounds, StrictModeThrows) {
  BoundContext ctx(BoundMode::Exact, kDefaultBitBudget, true);
  try {
    bound_rationalization(2, 2, 2, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BitBudget);
  }
}

TEST(Bounds, MonotonicityGrid) {
  for (std::uint64_t n = 1; n <= 3; ++n)
    for (std::uint64_t d = 1; d <= 3; ++d)
      for (std::uint64_t h = 1; h <= 3; ++h) {
        const auto v = N(n, d, h);
        if (n < 3) {
          EXPECT_TRUE(bound_le(v, N(n + 1, d, h))) << n << d << h;
        }
        if (d < 3) {
          EXPECT_TRUE(bound_le(v, N(n, d + 1, h))) << n << d << h;
        }
        if (h < 3) {
          EXPECT_TRUE(bound_le(v, N(n, d, h + 1))) << n << d << h;
        }
      }
}

TEST(Bounds, TowerUpperBoundWithinOneBitOfExact) {
  for (std::uint64_t d = 1; d <= 3; ++d)
    for (std::uint64_t h = 1; h <= 3; ++h) {
      BoundContext ctx;
      auto rep = bound_final(1, d, h, 7, ctx);
      for (auto& [name, v] : rep.trace) {
        if (!v.is_exact() || v.exact() < 2) continue;
        const double exact_log2 = detail::log2_upper(v.exact());
        const double tl = tower_log2(v.upper());
        EXPECT_GE(tl, exact_log2 - 1e-6) << name;
        EXPECT_LE(v.log2_upper(), exact_log2 + 1.0) << name;
        if (std::isfinite(tl)) {
          EXPECT_LE(tl, exact_log2 + 1.0) << name;
        }
      }
    }
}

TEST(Bounds, FallbackBoundsDominateExactValues) {
  // Tiny budget forces tower arithmetic; results must stay upper bounds.
  for (std::uint64_t d = 1; d <= 3; ++d)
    for (std::uint64_t h = 1; h <= 3; ++h) {
      BoundContext exact_ctx, tiny(BoundMode::Exact, 16);
      auto a = bound_final(1, d, h, 5, exact_ctx), b = bound_final(1, d, h, 5, tiny);
      ASSERT_EQ(a.trace.size(), b.trace.size());
      for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const auto& ex = a.trace[i].second;
        if (!ex.is_exact()) continue;
        EXPECT_TRUE(bound_le(ex, BoundValue::bounded(b.trace[i].second.upper()))) << a.trace[i].first;
      }
    }
}

TEST(Bounds, TowerArithmetic) {
  using namespace detail;
  auto t = tower_pow(Tower{0, 2}, Tower{0, 2000});  // 2^2000
  EXPECT_EQ(t.level, 1);
  EXPECT_NEAR(t.top, 2000, 1e-6);
  auto u = tower_pow(Tower{0, 2}, t);  // 2^(2^2000)
  EXPECT_EQ(u.level, 2);
  auto low = normalize(Tower{2, 5});  // 2^2^5 = 2^32
  EXPECT_EQ(low.level, 0);
  EXPECT_GE(low.top, std::exp2(32.0));
  EXPECT_LE(low.top, std::exp2(32.0) * (1 + 1e-12));
}

TEST(Bounds, RenderForms) {
  EXPECT_EQ(render_bound(BoundValue(mpz_class(109)), BoundMode::Exact), "109");
  EXPECT_EQ(render_bound(BoundValue(mpz_class(1024)), BoundMode::Log2).rfind("log2<=10", 0), 0u);
  EXPECT_EQ(render_bound(BoundValue::bounded(Tower{3, 7}), BoundMode::Exact).rfind("2^^3(", 0), 0u);
}

TEST(Bounds, LemmaAndDirectCaps) {
  BoundContext ctx;
  auto diag = bound_lemma_diag(2, 3, ctx);
  EXPECT_EQ(diag.get("totalDegree").exact(), 3 * 3 * 5 + 6 + 1);
  auto direct = bound_rational_direct(2, 1, 3, ctx);
  EXPECT_EQ(direct.get("dimV").exact(), 3);
  EXPECT_EQ(direct.get("degreeCap").exact(), 27);
  EXPECT_EQ(direct.get("heightCap").exact(), 9 * 81);
  auto sp = bound_sum_product({2, 3}, {1, 4}, 2);
  EXPECT_EQ(sp.sum_degree, 6);
  EXPECT_EQ(sp.product_height, 2 * 6 * 4);
  auto tails = bound_valuation_and_tails(2, 3, 0, ctx);
  EXPECT_EQ(tails.tail_degree.exact(), 4);
}
