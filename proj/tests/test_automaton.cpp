#include <gtest/gtest.h>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

const char* kApery = "1/(1-x1) * 1/((1-x2)*(1-x3)*(1-x4)*(1-x5) - x1*x2*x3)";

// Apery numbers mod 5 from their base-5 digits.
std::uint32_t apery_mod5_digits(std::uint64_t n) {
  std::uint32_t v = 1;
  for (; n; n /= 5) {
    const auto d = n % 5;
    if (d == 1 || d == 3) return 0;
    if (d == 2) v = v * 3 % 5;
  }
  return v;
}

Dfao central_binomial(std::uint32_t p) { return minimize(synthesize_dfao(parse_rational("1/(1-x-y)", p))); }

}  // namespace

TEST(Automaton, DigitHelpers) {
  EXPECT_EQ(digits_lsd(0, 5), std::vector<std::uint32_t>{});
  EXPECT_EQ(digits_lsd(27, 5), (std::vector<std::uint32_t>{2, 0, 1}));
  EXPECT_EQ(value_of_lsd({2, 0, 1}, 5), 27u);
}

TEST(Automaton, AperyMinimalAutomatonHasFiveStates) {
  auto d = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  EXPECT_EQ(d.size(), 5u);
  for (std::uint64_t n = 0; n < 3125; ++n) ASSERT_EQ(evaluate(d, n), apery_mod5_digits(n)) << n;
}

TEST(Automaton, EvaluationMatchesSeriesExpansion) {
  const auto r = parse_rational("(1+x)/(1-x*y-y^2-x)", 5);
  auto d = synthesize_dfao(r);
  auto diag = diagonal_full(series_expand(r, 60), 60);
  for (std::size_t n = 0; n < 60; ++n) EXPECT_EQ(evaluate(d, n), diag[n]) << n;
  auto m = minimize(d);
  EXPECT_LE(m.size(), d.size());
  for (std::size_t n = 0; n < 300; ++n) EXPECT_EQ(evaluate(m, n), evaluate(d, n));
}

TEST(Automaton, MinimizeIsIdempotentAndCanonical) {
  auto d = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  EXPECT_EQ(minimize(d), d);
  EXPECT_EQ(d.initial, 0u);
  EXPECT_EQ(reachable_states(d).size(), d.size());
}

TEST(Automaton, ValidateRejectsBrokenTables) {
  Dfao d{3, 0, {1, 0}, {{0, 1, 1}, {1, 1}}};
  EXPECT_THROW(d.validate(), Error);
  d.transitions[1].push_back(2);
  EXPECT_THROW(d.validate(), Error);
  d.transitions[1][2] = 1;
  EXPECT_NO_THROW(d.validate());
}

TEST(Automaton, EmptinessReturnsLeastWitness) {
  auto d = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  for (std::uint32_t b = 0; b < 5; ++b) {
    auto r = decide_emptiness(d, {b, false});
    ASSERT_FALSE(r.empty);
    std::uint64_t least = 0;
    while (apery_mod5_digits(least) != b) ++least;
    EXPECT_EQ(r.witness, least) << "b=" << b;
  }
  auto cb = central_binomial(2);
  EXPECT_EQ(decide_emptiness(cb, {1, true}).empty, true);  // C(2n,n) is even for n >= 1
  EXPECT_EQ(decide_emptiness(cb, {1, false}).witness, 0u);
}

TEST(Automaton, FinitenessOfCentralBinomialMod2) {
  auto d = central_binomial(2);
  auto one = decide_finiteness(d, {1, false});
  EXPECT_TRUE(one.finite);
  EXPECT_EQ(one.members, std::vector<std::uint64_t>{0});
  auto zero = decide_finiteness(d, {0, false});
  EXPECT_FALSE(zero.finite);
}

TEST(Automaton, InfiniteCertificateProducesMembers) {
  auto d = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  auto r = decide_finiteness(d, {0, false});
  ASSERT_FALSE(r.finite);
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<std::uint32_t> w = r.prefix;
    for (std::size_t i = 0; i < k; ++i) w.insert(w.end(), r.cycle.begin(), r.cycle.end());
    w.insert(w.end(), r.suffix.begin(), r.suffix.end());
    EXPECT_EQ(apery_mod5_digits(value_of_lsd(w, 5)), 0u);
  }
  // Nonzero residues of the Apery numbers mod 5 also occur infinitely often.
  EXPECT_FALSE(decide_finiteness(d, {3, false}).finite);
}

TEST(Automaton, PeriodicityFindsMinimalDescription) {
  auto d = central_binomial(2);
  auto r = decide_periodicity(d, {0, false}, 10, 10);
  EXPECT_TRUE(r.periodic);
  EXPECT_EQ(r.period, 1u);
  EXPECT_EQ(r.preperiod, 1u);
  auto apery = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  EXPECT_FALSE(decide_periodicity(apery, {1, false}, 6, 6).periodic);
}

TEST(Automaton, PeriodicityOfAPeriodicSequence) {
  // 1/(1 - x^2) has diagonal 1, 0, 1, 0, ...: zero set is the odd numbers.
  auto d = minimize(synthesize_dfao(parse_rational("1/(1-x^2)", 3)));
  auto r = decide_periodicity(d, {0, false}, 5, 5);
  EXPECT_TRUE(r.periodic);
  EXPECT_EQ(r.period, 2u);
  EXPECT_EQ(r.preperiod, 0u);
}

TEST(Automaton, ExcludeZeroChangesOnlyTheEmptyWord) {
  auto d = central_binomial(3);
  auto with = decide_emptiness(d, {1, false});
  auto without = decide_emptiness(d, {1, true});
  EXPECT_EQ(with.witness, 0u);
  EXPECT_EQ(without.witness, 4u);  // C(8,4) = 70 is the first n >= 1 with value 1 mod 3
  EXPECT_EQ(evaluate(d, without.witness), 1u);
  for (std::uint64_t n = 1; n < without.witness; ++n) EXPECT_NE(evaluate(d, n), 1u);
}

TEST(Automaton, DotExport) {
  auto d = central_binomial(2);
  const auto dot = export_dot(d);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("Q0/1"), std::string::npos);
}
