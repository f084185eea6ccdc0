#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "diagfp/rational.hpp"
#include "diagfp/series.hpp"

namespace diagfp {

/// Digits j = (j_1, ..., j_m), each in {0, ..., p-1}.
using DigitVector = std::vector<std::uint32_t>;

namespace detail {

inline void check_digits(const DigitVector& j, std::size_t nvars, std::uint32_t p) {
  if (j.size() != nvars)
    fail(ErrorCode::DimMismatch, "digit vector has " + std::to_string(j.size()) + " entries, expected " +
                                     std::to_string(nvars));
  for (auto d : j)
    if (d >= p) fail(ErrorCode::DimMismatch, "digit " + std::to_string(d) + " out of range for p=" + std::to_string(p));
}

inline std::uint64_t residue_key(const Monomial& m, std::size_t nvars, std::uint32_t p) {
  std::uint64_t key = 0;
  for (std::size_t k = nvars; k-- > 0;) key = key * p + m[k] % p;
  return key;
}

}  // namespace detail

/// Cartier operator: keeps the terms whose exponents are congruent to j mod p
/// and divides those exponents by p. Over F_p the p-th root of a coefficient
/// is the coefficient itself.
inline MultiPoly cartier_poly(const MultiPoly& g, const DigitVector& j) {
  const auto p = g.field().prime();
  detail::check_digits(j, g.nvars(), p);
  MultiPoly::Builder b(g.field(), g.nvars());
  for (auto& [m, c] : g.terms()) {
    bool match = true;
    Monomial q;
    for (std::size_t k = 0; k < g.nvars() && match; ++k) {
      if (m[k] % p != j[k]) match = false;
      q[k] = m[k] / p;
    }
    if (match) b.add(q, c);
  }
  return std::move(b).build();
}

/// Components of g = sum_j Lambda_j(g)^p x^j. Absent digit vectors have a
/// zero component.
struct FrobeniusDecomposition {
  PrimeField field;
  std::size_t nvars;
  std::map<DigitVector, MultiPoly> components;

  MultiPoly component(const DigitVector& j) const {
    auto it = components.find(j);
    return it == components.end() ? MultiPoly(field, nvars) : it->second;
  }
};

inline FrobeniusDecomposition frobenius_decompose(const MultiPoly& g) {
  const auto p = g.field().prime();
  std::map<DigitVector, MultiPoly::Builder> builders;
  for (auto& [m, c] : g.terms()) {
    DigitVector j(g.nvars());
    Monomial q;
    for (std::size_t k = 0; k < g.nvars(); ++k) {
      j[k] = m[k] % p;
      q[k] = m[k] / p;
    }
    auto it = builders.find(j);
    if (it == builders.end()) it = builders.emplace(j, MultiPoly::Builder(g.field(), g.nvars())).first;
    it->second.add(q, c);
  }
  FrobeniusDecomposition out{g.field(), g.nvars(), {}};
  for (auto& [j, b] : builders) out.components.emplace(j, std::move(b).build());
  return out;
}

/// sum_j component_j^p x^j, with the p-th power taken as exponent dilation.
inline MultiPoly reassemble(const FrobeniusDecomposition& d) {
  const auto p = d.field.prime();
  MultiPoly::Builder b(d.field, d.nvars);
  for (auto& [j, comp] : d.components)
    for (auto& [m, c] : comp.terms()) {
      Monomial e;
      for (std::size_t k = 0; k < d.nvars; ++k) e[k] = m[k] * p + j[k];
      b.add(e, c);
    }
  return std::move(b).build();
}

/// Coefficient-wise Cartier operator on a box-truncated series. The result is
/// exact on the box of side floor((M - 1 - max j) / p) + 1.
inline TruncatedSeries cartier_series(const TruncatedSeries& s, const DigitVector& j) {
  const auto p = s.field().prime();
  detail::check_digits(j, s.nvars(), p);
  std::uint32_t jmax = 0;
  for (auto d : j) jmax = std::max(jmax, d);
  if (s.order() <= jmax) fail(ErrorCode::InsufficientPrecision, "series too short for this digit");
  const std::size_t order = (s.order() - 1 - jmax) / p + 1;
  TruncatedSeries out(s.field(), s.nvars(), order);
  std::vector<std::size_t> src(s.nvars());
  out.for_each_index([&](std::span<const std::size_t> e, std::size_t) {
    for (std::size_t k = 0; k < s.nvars(); ++k) src[k] = e[k] * p + j[k];
    out.set_stored(e, s.stored(src));
  });
  return out;
}

/// A denominator Q (Q(0) = 1) shared by every state of the invariant space
/// V = { S/Q : deg S <= N }, with Q^(p-1) pre-bucketed by exponent residues.
class FixedDenominator {
 public:
  FixedDenominator(MultiPoly q, int cap) : q_(std::move(q)), cap_(cap) {
    if (q_.constant_term() != 1) fail(ErrorCode::NotExpandable, "denominator must satisfy Q(0) = 1");
    const auto p = q_.field().prime();
    auto qpow = q_.pow(p - 1);
    for (auto& t : qpow.terms()) buckets_[detail::residue_key(t.first, q_.nvars(), p)].push_back(t);
  }

  const MultiPoly& q() const noexcept { return q_; }
  int cap() const noexcept { return cap_; }
  std::size_t nvars() const noexcept { return q_.nvars(); }
  const PrimeField& field() const noexcept { return q_.field(); }

  /// Lambda_j(S * Q^(p-1)) without forming the full product.
  MultiPoly apply(const MultiPoly& s, const DigitVector& j) const {
    const auto p = field().prime();
    const std::size_t m = nvars();
    MultiPoly::Builder b(field(), m);
    Monomial need;
    for (auto& [sm, sc] : s.terms()) {
      for (std::size_t k = 0; k < m; ++k) need[k] = (j[k] + p - sm[k] % p) % p;
      auto it = buckets_.find(detail::residue_key(need, m, p));
      if (it == buckets_.end()) continue;
      for (auto& [qm, qc] : it->second) {
        Monomial e;
        for (std::size_t k = 0; k < m; ++k) e[k] = (sm[k] + qm[k] - j[k]) / p;
        b.add(e, static_cast<std::uint64_t>(sc) * qc % p);
      }
    }
    return std::move(b).build();
  }

 private:
  MultiPoly q_;
  int cap_;
  std::unordered_map<std::uint64_t, std::vector<MultiPoly::Term>> buckets_;
};

/// Element S/Q of the invariant space; deg S <= N is maintained.
struct InvariantSpaceState {
  MultiPoly numerator;
  std::shared_ptr<const FixedDenominator> denominator;

  friend bool operator==(const InvariantSpaceState& a, const InvariantSpaceState& b) {
    return a.numerator == b.numerator && a.denominator == b.denominator;
  }
};

/// State for R = P/Q with degree cap N = height(R).
inline InvariantSpaceState initial_state(const RationalFunction& r) {
  auto den = std::make_shared<const FixedDenominator>(r.denominator(), r.height());
  return {r.numerator(), std::move(den)};
}

/// Lambda_j(S/Q) = S_j / Q with S_j = Lambda_j(S Q^(p-1)).
inline InvariantSpaceState cartier_fraction(const InvariantSpaceState& s, const DigitVector& j) {
  const auto& den = *s.denominator;
  detail::check_digits(j, den.nvars(), den.field().prime());
  if (s.numerator.total_degree() > den.cap())
    fail(ErrorCode::DegreeOverflow, "state numerator degree " + std::to_string(s.numerator.total_degree()) +
                                        " exceeds cap " + std::to_string(den.cap()));
  auto next = den.apply(s.numerator, j);
  if (next.total_degree() > den.cap())
    fail(ErrorCode::DegreeOverflow, "image numerator left the invariant space");
  return {std::move(next), s.denominator};
}

inline constexpr std::size_t kDefaultMaxStates = 100000;

/// Closure of a state under S -> Lambda_(i,...,i)(S Q^(p-1)), i in {0..p-1}.
/// States are numbered in breadth-first discovery order; transitions[s][i]
/// is the successor of state s on digit i.
struct Orbit {
  std::shared_ptr<const FixedDenominator> denominator;
  std::vector<MultiPoly> states;
  std::vector<std::vector<std::size_t>> transitions;
};

inline Orbit diagonal_orbit(const InvariantSpaceState& start, std::size_t max_states = kDefaultMaxStates) {
  if (max_states == 0) fail(ErrorCode::Precondition, "max_states must be positive");
  const auto& den = *start.denominator;
  const auto p = den.field().prime();
  const std::size_t m = den.nvars();
  Orbit orbit{start.denominator, {}, {}};
  std::unordered_map<MultiPoly, std::size_t, MultiPolyHash> ids;
  auto intern = [&](MultiPoly s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    if (orbit.states.size() >= max_states)
      fail(ErrorCode::StateBudget, "orbit exceeded " + std::to_string(max_states) + " states");
    const auto id = orbit.states.size();
    ids.emplace(s, id);
    orbit.states.push_back(std::move(s));
    return id;
  };
  if (start.numerator.total_degree() > den.cap()) fail(ErrorCode::DegreeOverflow, "start state outside V");
  intern(start.numerator);
  for (std::size_t cur = 0; cur < orbit.states.size(); ++cur) {
    std::vector<std::size_t> row(p);
    for (std::uint32_t i = 0; i < p; ++i) {
      auto next = cartier_fraction({orbit.states[cur], start.denominator}, DigitVector(m, i));
      row[i] = intern(std::move(next.numerator));
    }
    orbit.transitions.push_back(std::move(row));
  }
  return orbit;
}

}  // namespace diagfp
