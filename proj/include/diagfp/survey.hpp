#pragma once

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "diagfp/annihilator.hpp"
#include "diagfp/bounds.hpp"
#include "diagfp/parser.hpp"

namespace diagfp {

enum class FamilyKind { Multinomial, BinomialPower, RsSum, Custom };

/// f_r = sum (rn)!/n!^r x^n, g_r = sum C(2n,n)^r x^n,
/// R_s-sum = f_6 + ... + f_(6+s-1), or a custom rational diagonal.
struct SequenceFamily {
  FamilyKind kind = FamilyKind::Multinomial;
  unsigned param = 1;
  std::string expression;  // custom only

  static SequenceFamily multinomial(unsigned r) { return {FamilyKind::Multinomial, r, {}}; }
  static SequenceFamily binomial_power(unsigned r) { return {FamilyKind::BinomialPower, r, {}}; }
  static SequenceFamily rs_sum(unsigned s) { return {FamilyKind::RsSum, s, {}}; }
  static SequenceFamily custom(std::string expr) { return {FamilyKind::Custom, 0, std::move(expr)}; }

  std::string name() const {
    switch (kind) {
      case FamilyKind::Multinomial: return "f";
      case FamilyKind::BinomialPower: return "g";
      case FamilyKind::RsSum: return "R";
      case FamilyKind::Custom: return "custom";
    }
    return "custom";
  }

  void validate() const {
    switch (kind) {
      case FamilyKind::Multinomial:
        if (param < 1 || param > kMaxVars) fail(ErrorCode::Precondition, "f_r needs 1 <= r <= " + std::to_string(kMaxVars));
        break;
      case FamilyKind::BinomialPower:
        if (param < 1 || 2 * param > kMaxVars) fail(ErrorCode::Precondition, "g_r needs 1 <= 2r <= " + std::to_string(kMaxVars));
        break;
      case FamilyKind::RsSum:
        if (param < 1 || 6 + param - 1 > kMaxVars) fail(ErrorCode::Precondition, "R_s needs 1 <= s <= " + std::to_string(kMaxVars - 5));
        break;
      case FamilyKind::Custom:
        if (expression.empty()) fail(ErrorCode::Syntax, "custom family needs an expression");
        break;
    }
  }
};

namespace detail {

inline std::string sum_of_vars(unsigned from, unsigned to) {
  std::string s;
  for (unsigned k = from; k <= to; ++k) s += (k > from ? "+x" : "x") + std::to_string(k);
  return s;
}

// (rn)!/n!^r for n < count, via a(n) = a(n-1) * prod_k (r(n-1)+k) / n^r.
inline std::vector<mpz_class> multinomials(unsigned r, std::size_t count) {
  std::vector<mpz_class> out;
  mpz_class a = 1;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) {
      for (unsigned k = 1; k <= r; ++k) a *= static_cast<unsigned long>(r * (n - 1) + k);
      mpz_class nr;
      mpz_ui_pow_ui(nr.get_mpz_t(), static_cast<unsigned long>(n), r);
      mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), nr.get_mpz_t());
    }
    out.push_back(a);
  }
  return out;
}

inline std::vector<std::uint32_t> reduce_all(const std::vector<mpz_class>& v, std::uint32_t p) {
  std::vector<std::uint32_t> out;
  out.reserve(v.size());
  for (auto& x : v) out.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), p)));
  return out;
}

inline constexpr std::size_t kMaxFamilyTerms = std::size_t{1} << 20;

}  // namespace detail

/// Exact central binomials C(2n, n), n < count.
inline std::vector<mpz_class> central_binomials(std::size_t count) {
  std::vector<mpz_class> out;
  mpz_class c = 1;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) {
      c *= static_cast<unsigned long>(4 * n - 2);
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(n));
    }
    out.push_back(c);
  }
  return out;
}

/// Catalan numbers C(2n, n)/(n+1) reduced mod p, n < count.
inline std::vector<std::uint32_t> catalan_mod(std::size_t count, std::uint32_t p) {
  auto c = central_binomials(count);
  for (std::size_t n = 0; n < count; ++n) mpz_divexact_ui(c[n].get_mpz_t(), c[n].get_mpz_t(), n + 1);
  return detail::reduce_all(c, p);
}

/// The rational function whose diagonal is the family. R_s pads each summand
/// 1/(1 - (x_1+...+x_r)) with factors 1/(1 - x_k) for the unused variables,
/// so that its diagonal is exactly f_6 + ... + f_(6+s-1).
inline RationalFunction family_rational(const SequenceFamily& fam, std::uint32_t p) {
  fam.validate();
  std::string expr;
  switch (fam.kind) {
    case FamilyKind::Multinomial: expr = "1/(1-(" + detail::sum_of_vars(1, fam.param) + "))"; break;
    case FamilyKind::BinomialPower:
      for (unsigned k = 1; k <= fam.param; ++k)
        expr += (k > 1 ? "*" : "") + std::string("1/(1-x") + std::to_string(2 * k - 1) + "-x" + std::to_string(2 * k) + ")";
      break;
    case FamilyKind::RsSum: {
      const unsigned m = 6 + fam.param - 1;
      for (unsigned r = 6; r <= m; ++r) {
        if (r > 6) expr += "+";
        expr += "1/(1-(" + detail::sum_of_vars(1, r) + "))";
        for (unsigned k = r + 1; k <= m; ++k) expr += "*1/(1-x" + std::to_string(k) + ")";
      }
      break;
    }
    case FamilyKind::Custom: expr = fam.expression; break;
  }
  return parse_rational(expr, p);
}

/// First n_max coefficients mod p, computed exactly over the integers (or by
/// automaton walk for custom families).
inline std::vector<std::uint32_t> family_coefficients(const SequenceFamily& fam, std::size_t n_max, std::uint32_t p) {
  fam.validate();
  if (n_max < 1) fail(ErrorCode::Precondition, "n_max must be at least 1");
  if (!is_prime(p)) fail(ErrorCode::BadPrime, std::to_string(p) + " is not prime");
  if (n_max > detail::kMaxFamilyTerms)
    fail(ErrorCode::Budget, "requested " + std::to_string(n_max) + " terms; limit is " +
                                std::to_string(detail::kMaxFamilyTerms));
  switch (fam.kind) {
    case FamilyKind::Multinomial: return detail::reduce_all(detail::multinomials(fam.param, n_max), p);
    case FamilyKind::BinomialPower: {
      auto c = detail::reduce_all(central_binomials(n_max), p);
      PrimeField field(p);
      for (auto& v : c) v = field.pow(v, fam.param);
      return c;
    }
    case FamilyKind::RsSum: {
      std::vector<mpz_class> sum(n_max, 0);
      for (unsigned r = 6; r <= 6 + fam.param - 1; ++r) {
        auto f = detail::multinomials(r, n_max);
        for (std::size_t n = 0; n < n_max; ++n) sum[n] += f[n];
      }
      return detail::reduce_all(sum, p);
    }
    case FamilyKind::Custom:
      return diagonal_prefix(synthesize_dfao(family_rational(fam, p)), n_max).coefficients();
  }
  return {};
}

struct LucasResult {
  bool pass = true;
  std::size_t n = 0, j = 0;  // first counterexample
};

/// a(pn + j) = a(n) a(j) mod p for n < n_cap and j < min(p, j_cap).
inline LucasResult lucas_check(const std::vector<std::uint32_t>& a, std::uint32_t p, std::size_t n_cap,
                               std::size_t j_cap) {
  if (n_cap < 1 || j_cap < 1) fail(ErrorCode::Precondition, "caps must be at least 1");
  const std::size_t jmax = std::min<std::size_t>(p, j_cap);
  if (a.size() < p * (n_cap - 1) + jmax)
    fail(ErrorCode::InsufficientPrecision, "sequence too short for the requested caps");
  PrimeField field(p);
  for (std::size_t n = 0; n < n_cap; ++n)
    for (std::size_t j = 0; j < jmax; ++j)
      if (a[p * n + j] % p != field.mul(a[n] % p, a[j] % p)) return {false, n, j};
  return {};
}

inline LucasResult lucas_check(const SequenceFamily& fam, std::uint32_t p, std::size_t n_cap, std::size_t j_cap) {
  return lucas_check(family_coefficients(fam, p * n_cap + p, p), p, n_cap, j_cap);
}

struct FactorCheckResult {
  bool pass = true;
  std::size_t fail_order = 0;
};

/// f(x) = A(x) f(x^p) mod x^M with A(x) = sum_{n<p} a(n) x^n.
inline FactorCheckResult frobenius_factor_check(const std::vector<std::uint32_t>& a, std::uint32_t p, std::size_t M) {
  if (a.size() < M) fail(ErrorCode::InsufficientPrecision, "sequence shorter than the check order");
  PrimeField field(p);
  for (std::size_t n = 0; n < M; ++n) {
    const std::size_t j = n % p;
    const std::uint32_t rhs = j < a.size() ? field.mul(a[j] % p, a[n / p] % p) : 0;
    if (a[n] % p != rhs) return {false, n};
  }
  return {};
}

inline FactorCheckResult frobenius_factor_check(const SequenceFamily& fam, std::uint32_t p, std::size_t M) {
  return frobenius_factor_check(family_coefficients(fam, std::max<std::size_t>(M, p), p), p, M);
}

struct SurveyRecord {
  std::string family;
  unsigned param = 0;
  std::uint32_t p = 0;
  bool complete = true;
  std::string note;  // reason when incomplete
  std::size_t rank = 0;
  std::vector<int> ore_degrees;
  double lower_ref = 0;       // p^(s/2)
  double upper_ref_log2 = 0;  // log2 of p^dim V
  std::size_t states = 0;
  long long millis = 0;

  int max_ore_degree() const {
    int m = 0;
    for (auto d : ore_degrees) m = std::max(m, d);
    return m;
  }
};

struct SurveyOptions {
  AnnihilatorOptions annihilator;
  bool record_time = true;  // false zeroes `millis` for byte-identical output
};

/// One record per prime, in input order. A state-budget overrun marks the
/// row incomplete instead of aborting.
inline std::vector<SurveyRecord> degree_survey(const SequenceFamily& fam, const std::vector<std::uint32_t>& primes,
                                               const SurveyOptions& opts = {}) {
  fam.validate();
  std::vector<SurveyRecord> out;
  for (auto p : primes) {
    SurveyRecord rec;
    rec.family = fam.name();
    rec.param = fam.param;
    rec.p = p;
    const double s = fam.kind == FamilyKind::RsSum ? fam.param : 1.0;
    rec.lower_ref = std::pow(static_cast<double>(p), s / 2.0);
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto rf = family_rational(fam, p);
      BoundContext ctx(BoundMode::Log2);
      auto direct = bound_rational_direct(rf.nvars(), static_cast<std::uint64_t>(rf.height()), p, ctx);
      rec.upper_ref_log2 = direct.get("degreeCap").log2_upper();
      rec.states = diagonal_orbit(initial_state(rf), opts.annihilator.max_states).states.size();
      auto ann = find_annihilator(rf, opts.annihilator);
      rec.rank = ann.r();
      for (auto& q : ann.coefficients) rec.ore_degrees.push_back(q.degree());
      if (rec.rank < 1) fail(ErrorCode::VerifyFail, "survey row with rank 0");
      if (mpz_class(rec.max_ore_degree()) > ann.height_bound)
        fail(ErrorCode::VerifyFail, "measured Ore degree exceeds r^2 p^(r+1)");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StateBudget) throw;
      rec.complete = false;
      rec.note = e.what();
    }
    if (opts.record_time)
      rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(rec));
  }
  return out;
}

/// CSV with header family,param,p,rank,maxOreDegree,lowerRef,upperRefLog2,states,millis.
/// Incomplete rows leave rank, maxOreDegree and states empty.
inline std::string survey_csv(const std::vector<SurveyRecord>& rows) {
  std::string out = "family,param,p,rank,maxOreDegree,lowerRef,upperRefLog2,states,millis\n";
  char buf[64];
  for (auto& r : rows) {
    out += r.family + "," + std::to_string(r.param) + "," + std::to_string(r.p) + ",";
    out += r.complete ? std::to_string(r.rank) + "," + std::to_string(r.max_ore_degree()) + "," : std::string(",,");
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,", r.lower_ref, r.upper_ref_log2);
    out += buf;
    out += (r.complete ? std::to_string(r.states) : std::string()) + "," + std::to_string(r.millis) + "\n";
  }
  return out;
}

}  // namespace diagfp
