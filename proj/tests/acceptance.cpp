// Acceptance checks 1-10; one PASS/FAIL line each. Oracles are computed
// independently of the pipeline under test (exact GMP sequences, closed forms).

#include <gmpxx.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::uint32_t mod(const mpz_class& v, std::uint32_t p) { return static_cast<std::uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p)); }

const char* kCentral = "1/(1-x-y)";
const char* kBinomialSquare = "2/(2-x1-x2) * 2/(2-x3-x4)";
const char* kApery = "1/(1-x1) * 1/((1-x2)*(1-x3)*(1-x4)*(1-x5) - x1*x2*x3)";
const char* kMultinomial6 = "1/(1-x1-x2-x3-x4-x5-x6)";

// ---- exact integer sequences ----

std::vector<mpz_class> central_binomial_seq(std::size_t n) {
  std::vector<mpz_class> out(n);
  mpz_class c = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) c = c * static_cast<unsigned long>(4 * k - 2) / static_cast<unsigned long>(k);
    out[k] = c;
  }
  return out;
}

// n^3 A(n) = (34n^3 - 51n^2 + 27n - 5) A(n-1) - (n-1)^3 A(n-2)
std::vector<mpz_class> apery_recurrence(std::size_t n) {
  std::vector<mpz_class> a(n);
  if (n > 0) a[0] = 1;
  if (n > 1) a[1] = 5;
  for (std::size_t k = 2; k < n; ++k) {
    const mpz_class K = static_cast<unsigned long>(k);
    mpz_class num = (34 * K * K * K - 51 * K * K + 27 * K - 5) * a[k - 1] - (K - 1) * (K - 1) * (K - 1) * a[k - 2];
    mpz_divexact(a[k].get_mpz_t(), num.get_mpz_t(), mpz_class(K * K * K).get_mpz_t());
  }
  return a;
}

// sum_k C(n,k)^2 C(n+k,k)^2
mpz_class apery_sum(unsigned long n) {
  mpz_class total = 0, b1, b2;
  for (unsigned long k = 0; k <= n; ++k) {
    mpz_bin_uiui(b1.get_mpz_t(), n, k);
    mpz_bin_uiui(b2.get_mpz_t(), n + k, k);
    total += b1 * b1 * b2 * b2;
  }
  return total;
}

// (6n)! / n!^6
std::vector<mpz_class> multinomial6_seq(std::size_t n) {
  std::vector<mpz_class> out(n);
  mpz_class c = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) {
      for (unsigned long i = 0; i < 6; ++i) c *= static_cast<unsigned long>(6 * k - i);
      mpz_class kk = static_cast<unsigned long>(k), k6;
      mpz_pow_ui(k6.get_mpz_t(), kk.get_mpz_t(), 6);
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), k6.get_mpz_t());
    }
    out[k] = c;
  }
  return out;
}

std::vector<std::uint32_t> reduce(const std::vector<mpz_class>& v, std::uint32_t p) {
  std::vector<std::uint32_t> out;
  for (auto& x : v) out.push_back(mod(x, p));
  return out;
}

// 16^-n C(2n,n)^2 mod p (p odd)
std::vector<std::uint32_t> binomial_square_seq(std::size_t n, std::uint32_t p) {
  PrimeField f(p);
  const auto cb = reduce(central_binomial_seq(n), p);
  const auto inv16 = f.inv(16 % p);
  std::vector<std::uint32_t> out(n);
  std::uint32_t scale = 1;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = f.mul(scale, f.mul(cb[k], cb[k]));
    scale = f.mul(scale, inv16);
  }
  return out;
}

// sum_i Q_i(x) g(x)^(p^i) mod x^order, computed directly.
bool ore_residue_zero(const std::vector<UniPoly>& q, const std::vector<std::uint32_t>& g, std::uint32_t p,
                      std::size_t order, std::size_t* first_bad) {
  PrimeField f(p);
  std::vector<std::uint32_t> acc(order, 0);
  std::size_t step = 1;
  for (auto& qi : q) {
    std::vector<std::uint32_t> gp(order, 0);
    for (std::size_t n = 0; n * step < order && n < g.size(); ++n) gp[n * step] = g[n];
    for (std::size_t t = 0; t < qi.coeffs().size() && t < order; ++t)
      for (std::size_t n = 0; n + t < order; ++n) acc[n + t] = f.add(acc[n + t], f.mul(qi.coeffs()[t], gp[n]));
    step = std::min<std::size_t>(step * p, order + 1);
  }
  for (std::size_t n = 0; n < order; ++n)
    if (acc[n]) {
      *first_bad = n;
      return false;
    }
  return true;
}

MultiPoly random_poly(const PrimeField& field, std::size_t nvars, std::mt19937& rng) {
  MultiPoly::Builder b(field, nvars);
  std::uniform_int_distribution<int> ex(0, 20), nterms(1, 12);
  std::uniform_int_distribution<std::uint32_t> co(1, field.prime() - 1);
  for (int t = nterms(rng); t > 0; --t) {
    Monomial m;
    for (std::size_t k = 0; k < nvars; ++k) m[k] = static_cast<std::uint32_t>(ex(rng));
    b.add(m, co(rng));
  }
  return std::move(b).build();
}

// ---- criteria ----

Outcome criterion1() {
  std::mt19937 rng(20240601);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    PrimeField f(p);
    const std::size_t m = 3;
    for (int it = 0; it < 1000; ++it) {
      const auto g = random_poly(f, m, rng);
      MultiPoly sum(f, m);
      DigitVector j(m, 0);
      for (;;) {
        const auto comp = cartier_poly(g, j);
        if (!comp.is_zero()) {
          Monomial xj;
          for (std::size_t k = 0; k < m; ++k) xj[k] = j[k];
          sum = sum + comp.pow(p).shifted(xj);  // true p-th power in F_p[x]
        }
        std::size_t k = 0;
        while (k < m && ++j[k] == p) j[k++] = 0;
        if (k == m) break;
      }
      if (sum != g) return {false, "reassembly differs at p=" + std::to_string(p) + " sample " + std::to_string(it)};
    }
  }
  return {true, "4000 random polynomials reassembled exactly"};
}

Outcome criterion2() {
  for (std::uint32_t p : {3u, 5u, 7u, 13u}) {
    const auto d = diagonal_full(series_expand(parse_rational(kBinomialSquare, p), 50), 50);
    const auto want = binomial_square_seq(50, p);
    for (std::size_t n = 0; n < 50; ++n)
      if (d[n] != want[n]) return {false, "p=" + std::to_string(p) + " n=" + std::to_string(n)};
  }
  return {true, "n<50, p in {3,5,7,13}"};
}

Outcome criterion3() {
  std::vector<mpz_class> sums;
  for (unsigned long n = 0; n < 30; ++n) sums.push_back(apery_sum(n));
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto d = diagonal_full(series_expand(parse_rational(kApery, p), 30), 30);
    for (std::size_t n = 0; n < 30; ++n)
      if (d[n] != mod(sums[n], p)) return {false, "p=" + std::to_string(p) + " n=" + std::to_string(n)};
  }
  return {true, "n<30, p in {2,3,5,7}"};
}

Outcome criterion4() {
  const auto d = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  if (d.size() != 5) return {false, std::to_string(d.size()) + " states"};
  const std::size_t count = 15625;  // 5^6
  const auto exact = apery_recurrence(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint32_t rule = 1;
    for (std::uint64_t m = n; m; m /= 5) {
      const auto dig = m % 5;
      if (dig == 1 || dig == 3) {
        rule = 0;
        break;
      }
      if (dig == 2) rule = rule * 3 % 5;  // 3^(#2s) mod 5 cycles 1,3,4,2
    }
    const auto got = evaluate(d, n);
    if (got != rule) return {false, "digit rule fails at n=" + std::to_string(n)};
    if (got != mod(exact[n], 5)) return {false, "coefficient mismatch at n=" + std::to_string(n)};
  }
  return {true, "5 states; digit rules and exact values agree for n<5^6"};
}

Outcome criterion5() {
  struct Case {
    const char* name;
    const char* expr;
    std::function<std::vector<std::uint32_t>(std::size_t, std::uint32_t)> oracle;
  };
  const std::vector<Case> cases = {
      {"central", kCentral, [](std::size_t n, std::uint32_t p) { return reduce(central_binomial_seq(n), p); }},
      {"binomialSquare", kBinomialSquare, binomial_square_seq},
      {"apery", kApery, [](std::size_t n, std::uint32_t p) { return reduce(apery_recurrence(n), p); }},
      {"multinomial6", kMultinomial6, [](std::size_t n, std::uint32_t p) { return reduce(multinomial6_seq(n), p); }},
  };
  const std::size_t order = 2000;
  std::string summary;
  for (auto& c : cases)
    for (std::uint32_t p : {3u, 5u, 7u}) {
      const auto rf = parse_rational(c.expr, p);
      AnnihilatorOptions opts;
      opts.verify_order = order;
      const auto a = find_annihilator(rf, opts);
      const std::string tag = std::string(c.name) + " p=" + std::to_string(p);
      if (!a.verified || a.verified_to_order < order) return {false, tag + " not verified to 2000"};
      mpz_class dimV;
      mpz_bin_uiui(dimV.get_mpz_t(), static_cast<unsigned long>(rf.height() + rf.nvars()), rf.nvars());
      if (mpz_class(static_cast<unsigned long>(a.r())) > dimV) return {false, tag + " r exceeds C(h+m,m)"};
      mpz_class cap;
      mpz_ui_pow_ui(cap.get_mpz_t(), p, a.r() + 1);
      cap *= static_cast<unsigned long>(a.r() * a.r());
      if (mpz_class(a.max_degree()) > cap) return {false, tag + " degree exceeds r^2 p^(r+1)"};
      std::size_t bad = 0;
      if (!ore_residue_zero(a.coefficients, c.oracle(order, p), p, order, &bad))
        return {false, tag + " residue nonzero at " + std::to_string(bad)};
      summary += " " + tag + ":r=" + std::to_string(a.r());
    }
  // (1-4x) g^2 = 1 in Ore form: (1-4x)^((p-1)/2) Y^p - Y.
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeField f(p);
    UniPoly q1 = UniPoly::constant(f, 1);
    for (std::uint32_t k = 0; k < (p - 1) / 2; ++k) q1 = q1 * UniPoly(f, {1, f.reduce(-4)});
    std::size_t bad = 0;
    if (!ore_residue_zero({UniPoly::constant(f, -1), q1}, reduce(central_binomial_seq(order), p), p, order, &bad))
      return {false, "known central-binomial relation fails at p=" + std::to_string(p)};
    const auto a = find_annihilator(parse_rational(kCentral, p));
    // Both are rank 1 and monic in the top coefficient after scaling: compare up to scalar.
    const auto s = f.mul(q1.leading(), f.inv(a.coefficients[1].leading()));
    if (a.coefficients.size() != 2 || a.coefficients[0].scaled(s) != UniPoly::constant(f, -1) ||
        a.coefficients[1].scaled(s) != q1)
      return {false, "central-binomial annihilator differs from the known relation at p=" + std::to_string(p)};
  }
  return {true, "verified to 2000 against exact sequences;" + summary};
}

Outcome criterion6() {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    PrimeField f(p);
    // x sqrt(1-x) from s^2 = 1 - x, s(0) = 1.
    std::vector<std::uint32_t> sq(200, 0), fx(200, 0);
    sq[0] = 1;
    for (std::size_t k = 1; k < 200; ++k) {
      std::uint32_t rhs = k == 1 ? f.reduce(-1) : 0;
      for (std::size_t i = 1; i < k; ++i) rhs = f.sub(rhs, f.mul(sq[i], sq[k - i]));
      sq[k] = f.mul(rhs, f.inv(2));
    }
    for (std::size_t k = 0; k + 1 < 200; ++k) fx[k + 1] = sq[k];
    AlgebraicSeriesSpec spec{parse_polynomial("y^2 - x^2*(1-x)", p, 2),
                             TruncatedSeries::univariate(f, std::vector<std::uint32_t>(fx.begin(), fx.begin() + 12))};
    const auto res = rationalize_univariate(spec, 200);
    const auto d = diagonal_half(series_expand(res.R, 200), 200);
    for (std::size_t n = 0; n < 200; ++n)
      if (d[n] != fx[n]) return {false, "p=" + std::to_string(p) + " n=" + std::to_string(n)};
    if (res.R.height() > 109) return {false, "height " + std::to_string(res.R.height()) + " > 109"};
  }
  return {true, "Delta_1/2 matches to 200 terms, height <= 109, p in {5,7,11}"};
}

Outcome criterion7() {
  auto closed_form = [](unsigned long d, unsigned long h) { return h * d * (2 * d - 1) * (2 * d + 1) + 2 * h * (d + 1) + 1; };
  BoundContext ctx;
  if (bound_rationalization(1, 1, 1, ctx).get("N").exact() != 8) return {false, "N(1,1,1) != 8"};
  if (bound_rationalization(1, 2, 3, ctx).get("N").exact() != 109) return {false, "N(1,2,3) != 109"};
  if (bound_final(1, 2, 3, 5, ctx).get("A").exact() != 6105) return {false, "A(1,2,3) != 6105"};
  for (unsigned long d = 1; d <= 3; ++d)
    for (unsigned long h = 1; h <= 3; ++h)
      if (rationalization_height(d, h).exact() != closed_form(d, h)) return {false, "N(1,d,h) closed form mismatch"};
  auto N = [](std::uint64_t n, std::uint64_t d, std::uint64_t h) {
    BoundContext c;
    return bound_rationalization(n, d, h, c).get("N");
  };
  auto le = [](const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() <= b.exact();
    auto [x, y] = detail::align(a.upper(), b.upper());
    return x.top <= y.top;
  };
  for (std::uint64_t n = 1; n <= 3; ++n)
    for (std::uint64_t d = 1; d <= 3; ++d)
      for (std::uint64_t h = 1; h <= 3; ++h) {
        const auto v = N(n, d, h);
        if ((n < 3 && !le(v, N(n + 1, d, h))) || (d < 3 && !le(v, N(n, d + 1, h))) || (h < 3 && !le(v, N(n, d, h + 1))))
          return {false, "monotonicity fails at (" + std::to_string(n) + "," + std::to_string(d) + "," + std::to_string(h) + ")"};
      }
  // log2 mode against exact mode: within +1 bit wherever both exist.
  for (std::uint64_t d = 1; d <= 3; ++d)
    for (std::uint64_t h = 1; h <= 3; ++h) {
      BoundContext ex(BoundMode::Exact), lg(BoundMode::Log2, 64);
      const auto a = bound_final(1, d, h, 5, ex), b = bound_final(1, d, h, 5, lg);
      for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const auto& e = a.trace[i].second;
        if (!e.is_exact() || e.exact() < 1) continue;
        const double exact_log2 = detail::log2_upper(e.exact());
        const double lv = b.trace[i].second.log2_upper();
        const double floor_log2 = static_cast<double>(mpz_sizeinbase(e.exact().get_mpz_t(), 2) - 1);
        if (!std::isfinite(lv)) continue;
        if (lv < floor_log2 || lv > exact_log2 + 1.0) return {false, "log2 mismatch for " + a.trace[i].first};
      }
    }
  return {true, "N(1,1,1)=8, N(1,2,3)=109, A=6105; grid monotone; log2 within 1 bit"};
}

Outcome criterion8() {
  const auto cb = minimize(synthesize_dfao(parse_rational(kCentral, 2)));
  const auto fin = decide_finiteness(cb, {1, false});
  if (!fin.finite || fin.members != std::vector<std::uint64_t>{0}) return {false, "central b=1 not finite {0}"};
  const auto per = decide_periodicity(cb, {0, false}, 10, 10);
  if (!per.periodic || per.period != 1 || per.preperiod != 1) return {false, "central b=0 not periodic(1,1)"};
  const auto ap = minimize(synthesize_dfao(parse_rational(kApery, 5)));
  const auto em = decide_emptiness(ap, {0, false});
  if (em.empty || em.witness != 1) return {false, "apery b=0 witness differs"};
  if (decide_finiteness(ap, {0, false}).finite) return {false, "apery b=0 finite"};
  return {true, "finite {0}; periodic(1,1); infinite with witness 1"};
}

Outcome criterion9() {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const std::size_t need = p * 50 + p;
    if (!lucas_check(reduce(central_binomial_seq(need), p), p, 50, 50).pass)
      return {false, "central binomial fails at p=" + std::to_string(p)};
    if (!lucas_check(reduce(multinomial6_seq(need), p), p, 50, 50).pass)
      return {false, "f6 fails at p=" + std::to_string(p)};
  }
  std::vector<mpz_class> catalan;
  for (auto& c : central_binomial_seq(60)) catalan.push_back(c / static_cast<unsigned long>(catalan.size() + 1));
  const auto r = lucas_check(reduce(catalan, 2), 2, 20, 2);
  if (r.pass || r.n != 1 || r.j != 0) return {false, "Catalan counterexample differs"};
  return {true, "central binomial and f6 pass; Catalan fails at (n=1, j=0, p=2)"};
}

Outcome criterion10() {
  SurveyOptions opts;
  opts.record_time = false;
  const auto rows = degree_survey(SequenceFamily::multinomial(6), {7, 11, 13}, opts);
  if (rows.size() != 3) return {false, "expected 3 records"};
  std::string detail;
  for (auto& r : rows) {
    if (!r.complete) return {false, "p=" + std::to_string(r.p) + " incomplete"};
    mpz_class cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), r.p, r.rank + 1);
    cap *= static_cast<unsigned long>(r.rank * r.rank);
    if (mpz_class(r.max_ore_degree()) > cap) return {false, "p=" + std::to_string(r.p) + " exceeds cap"};
    char buf[96];
    std::snprintf(buf, sizeof buf, " p=%u:r=%zu,deg=%d,ref=%.3f", r.p, r.rank, r.max_ore_degree(), r.lower_ref);
    detail += buf;
  }
  if (survey_csv(rows).empty()) return {false, "no CSV emitted"};
  return {true, "records emitted;" + detail};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s (%.2fs) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
