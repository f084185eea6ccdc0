#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "diagfp/cartier.hpp"

namespace diagfp {

/// Deterministic finite automaton with output reading base-p digits
/// least-significant first: a(n) = output(delta*(initial, digits of n)),
/// and a(0) = output(initial) (the empty word).
struct Dfao {
  std::uint32_t p = 2;
  std::size_t initial = 0;
  std::vector<std::uint32_t> output;
  std::vector<std::vector<std::size_t>> transitions;

  std::size_t size() const noexcept { return output.size(); }

  void validate() const {
    if (!is_prime(p)) fail(ErrorCode::BadPrime, "automaton base is not prime");
    if (output.empty() || transitions.size() != output.size())
      fail(ErrorCode::DimMismatch, "automaton state tables are inconsistent");
    if (initial >= output.size()) fail(ErrorCode::DimMismatch, "initial state out of range");
    for (auto& row : transitions) {
      if (row.size() != p) fail(ErrorCode::DimMismatch, "transition table is not total");
      for (auto t : row)
        if (t >= output.size()) fail(ErrorCode::DimMismatch, "transition target out of range");
    }
    for (auto o : output)
      if (o >= p) fail(ErrorCode::DimMismatch, "output outside F_p");
  }

  friend bool operator==(const Dfao&, const Dfao&) = default;
};

/// Automaton of the diagonal of P/Q mod p: states are the orbit numerators
/// S, digit i maps S to Lambda_(i,...,i)(S Q^(p-1)), output(S) = S(0).
inline Dfao dfao_from_orbit(const Orbit& orbit) {
  Dfao d;
  d.p = orbit.denominator->field().prime();
  d.initial = 0;
  for (auto& s : orbit.states) d.output.push_back(s.constant_term());
  d.transitions = orbit.transitions;
  return d;
}

inline Dfao synthesize_dfao(const RationalFunction& r, std::size_t max_states = kDefaultMaxStates) {
  return dfao_from_orbit(diagonal_orbit(initial_state(r), max_states));
}

inline std::uint32_t evaluate(const Dfao& d, std::uint64_t n) {
  std::size_t s = d.initial;
  while (n) {
    s = d.transitions[s][n % d.p];
    n /= d.p;
  }
  return d.output[s];
}

/// Least-significant-first base-p digits; empty for n = 0.
inline std::vector<std::uint32_t> digits_lsd(std::uint64_t n, std::uint32_t p) {
  std::vector<std::uint32_t> out;
  while (n) {
    out.push_back(static_cast<std::uint32_t>(n % p));
    n /= p;
  }
  return out;
}

inline std::uint64_t value_of_lsd(const std::vector<std::uint32_t>& digits, std::uint32_t p) {
  std::uint64_t n = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) n = n * p + *it;
  return n;
}

inline std::vector<std::size_t> reachable_states(const Dfao& d) {
  std::vector<bool> seen(d.size(), false);
  std::vector<std::size_t> order{d.initial};
  seen[d.initial] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto t : d.transitions[order[i]])
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
  return order;
}

/// Moore partition refinement; states are renumbered in breadth-first order
/// from the initial state.
inline Dfao minimize(const Dfao& d) {
  d.validate();
  auto reach = reachable_states(d);
  std::vector<std::size_t> cls(d.size(), 0);
  {
    std::map<std::uint32_t, std::size_t> ids;
    for (auto s : reach) cls[s] = ids.emplace(d.output[s], ids.size()).first->second;
  }
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(d.size(), 0);
    for (auto s : reach) {
      std::vector<std::size_t> sig{cls[s]};
      for (auto t : d.transitions[s]) sig.push_back(cls[t]);
      next[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    cls.swap(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  // BFS renumbering over classes.
  std::vector<std::size_t> rep(count, SIZE_MAX);
  for (auto s : reach)
    if (rep[cls[s]] == SIZE_MAX) rep[cls[s]] = s;
  std::vector<std::size_t> new_id(count, SIZE_MAX);
  std::vector<std::size_t> order{cls[d.initial]};
  new_id[cls[d.initial]] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto t : d.transitions[rep[order[i]]]) {
      auto c = cls[t];
      if (new_id[c] == SIZE_MAX) {
        new_id[c] = order.size();
        order.push_back(c);
      }
    }
  Dfao out;
  out.p = d.p;
  out.initial = 0;
  for (auto c : order) {
    out.output.push_back(d.output[rep[c]]);
    std::vector<std::size_t> row;
    for (auto t : d.transitions[rep[c]]) row.push_back(new_id[cls[t]]);
    out.transitions.push_back(std::move(row));
  }
  return out;
}

/// S = { n : a(n) = target }, optionally with n = 0 removed.
struct ResidueSetQuery {
  std::uint32_t target = 0;
  bool exclude_zero = false;
};

namespace detail {

inline bool accepts(const Dfao& d, std::size_t s, const ResidueSetQuery& q) { return d.output[s] == q.target; }

inline void check_query(const Dfao& d, const ResidueSetQuery& q) {
  d.validate();
  if (q.target >= d.p) fail(ErrorCode::DimMismatch, "target residue outside F_p");
}

}  // namespace detail

struct EmptinessResult {
  bool empty = true;
  std::uint64_t witness = 0;  // least element when nonempty
};

/// Exact emptiness test over canonical words (no most-significant zeros).
/// A nonempty set yields its least element.
inline EmptinessResult decide_emptiness(const Dfao& d, const ResidueSetQuery& q) {
  detail::check_query(d, q);
  if (!q.exclude_zero && detail::accepts(d, d.initial, q)) return {false, 0};
  const std::size_t n_states = d.size();
  // layers[k] = states reachable after exactly k digits.
  std::vector<std::vector<bool>> layers{std::vector<bool>(n_states, false)};
  layers[0][d.initial] = true;
  for (std::size_t len = 1; len <= n_states; ++len) {
    const auto& last = layers[len - 1];
    bool feasible = false;
    for (std::size_t s = 0; s < n_states && !feasible; ++s)
      if (last[s])
        for (std::uint32_t dig = 1; dig < d.p && !feasible; ++dig) feasible = detail::accepts(d, d.transitions[s][dig], q);
    if (feasible) {
      // Fix digits from the most significant end, always taking the smallest.
      std::vector<bool> target(n_states, false);
      for (std::size_t s = 0; s < n_states; ++s) target[s] = detail::accepts(d, s, q);
      std::vector<std::uint32_t> digits(len, 0);
      for (std::size_t pos = len; pos-- > 0;) {
        const auto& here = layers[pos];
        std::uint32_t chosen = d.p;
        for (std::uint32_t dig = (pos == len - 1 ? 1 : 0); dig < d.p && chosen == d.p; ++dig)
          for (std::size_t s = 0; s < n_states; ++s)
            if (here[s] && target[d.transitions[s][dig]]) {
              chosen = dig;
              break;
            }
        digits[pos] = chosen;
        std::vector<bool> prev(n_states, false);
        for (std::size_t s = 0; s < n_states; ++s) prev[s] = target[d.transitions[s][chosen]];
        target.swap(prev);
      }
      return {false, value_of_lsd(digits, d.p)};
    }
    std::vector<bool> next(n_states, false);
    for (std::size_t s = 0; s < n_states; ++s)
      if (last[s])
        for (auto t : d.transitions[s]) next[t] = true;
    layers.push_back(std::move(next));
  }
  return {true, 0};
}

struct FinitenessResult {
  bool finite = true;
  std::vector<std::uint64_t> members;  // sorted, when finite
  // When infinite: every n with LSD digits prefix + cycle^k + suffix (k >= 0)
  // belongs to the set.
  std::vector<std::uint32_t> prefix, cycle, suffix;
};

namespace detail {

// Canonical-word automaton: node = 2*state + flag, flag = last digit nonzero.
struct CanonicalGraph {
  std::size_t nodes;
  std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> edges;
  std::vector<bool> accepting;
  std::vector<bool> useful;
};

inline CanonicalGraph canonical_graph(const Dfao& d, const ResidueSetQuery& q) {
  CanonicalGraph g;
  g.nodes = 2 * d.size();
  g.edges.resize(g.nodes);
  g.accepting.assign(g.nodes, false);
  for (std::size_t s = 0; s < d.size(); ++s) {
    for (std::size_t flag = 0; flag < 2; ++flag)
      for (std::uint32_t dig = 0; dig < d.p; ++dig)
        g.edges[2 * s + flag].push_back({2 * d.transitions[s][dig] + (dig != 0 ? 1 : 0), dig});
    g.accepting[2 * s + 1] = accepts(d, s, q);
  }
  std::vector<bool> fwd(g.nodes, false), bwd(g.nodes, false);
  std::vector<std::size_t> stack{2 * d.initial};
  fwd[2 * d.initial] = true;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto [v, dig] : g.edges[u])
      if (!fwd[v]) {
        fwd[v] = true;
        stack.push_back(v);
      }
  }
  std::vector<std::vector<std::size_t>> rev(g.nodes);
  for (std::size_t u = 0; u < g.nodes; ++u)
    for (auto [v, dig] : g.edges[u]) rev[v].push_back(u);
  for (std::size_t u = 0; u < g.nodes; ++u)
    if (g.accepting[u]) {
      bwd[u] = true;
      stack.push_back(u);
    }
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : rev[u])
      if (!bwd[v]) {
        bwd[v] = true;
        stack.push_back(v);
      }
  }
  g.useful.resize(g.nodes);
  for (std::size_t u = 0; u < g.nodes; ++u) g.useful[u] = fwd[u] && bwd[u];
  return g;
}

// Digits of a path from `from` to `to` inside useful nodes (BFS).
inline std::optional<std::vector<std::uint32_t>> path_digits(const CanonicalGraph& g, std::size_t from,
                                                             const std::vector<bool>& goal, bool nonempty) {
  std::vector<std::size_t> parent(g.nodes, SIZE_MAX);
  std::vector<std::uint32_t> via(g.nodes, 0);
  std::vector<bool> seen(g.nodes, false);
  std::queue<std::size_t> frontier;
  if (!nonempty && goal[from]) return std::vector<std::uint32_t>{};
  for (auto [v, dig] : g.edges[from])
    if (g.useful[v] && !seen[v]) {
      seen[v] = true;
      parent[v] = from;
      via[v] = dig;
      frontier.push(v);
    }
  // Distinguish the start node when it is reached again through a cycle.
  std::size_t hit = SIZE_MAX;
  while (!frontier.empty() && hit == SIZE_MAX) {
    auto u = frontier.front();
    frontier.pop();
    if (goal[u]) {
      hit = u;
      break;
    }
    for (auto [v, dig] : g.edges[u])
      if (g.useful[v] && !seen[v]) {
        seen[v] = true;
        parent[v] = u;
        via[v] = dig;
        frontier.push(v);
      }
  }
  if (hit == SIZE_MAX) return std::nullopt;
  std::vector<std::uint32_t> digits;
  for (auto u = hit;;) {
    digits.push_back(via[u]);
    auto par = parent[u];
    if (par == from) break;
    u = par;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace detail

/// Exact finiteness test. Finite sets are listed (up to `list_cap` members);
/// infinite sets come with a pumpable witness.
inline FinitenessResult decide_finiteness(const Dfao& d, const ResidueSetQuery& q, std::size_t list_cap = 1000000) {
  detail::check_query(d, q);
  auto g = detail::canonical_graph(d, q);
  // Cycle detection restricted to useful nodes (iterative DFS colouring).
  std::vector<int> colour(g.nodes, 0);
  std::optional<std::size_t> on_cycle;
  for (std::size_t root = 0; root < g.nodes && !on_cycle; ++root) {
    if (!g.useful[root] || colour[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty() && !on_cycle) {
      auto& [u, i] = stack.back();
      if (i == g.edges[u].size()) {
        colour[u] = 2;
        stack.pop_back();
        continue;
      }
      auto v = g.edges[u][i++].first;
      if (!g.useful[v]) continue;
      if (colour[v] == 1) on_cycle = v;
      else if (colour[v] == 0) {
        colour[v] = 1;
        stack.push_back({v, 0});
      }
    }
  }
  FinitenessResult res;
  if (on_cycle) {
    res.finite = false;
    std::vector<bool> goal(g.nodes, false);
    goal[*on_cycle] = true;
    res.prefix = *detail::path_digits(g, 2 * d.initial, goal, false);
    res.cycle = *detail::path_digits(g, *on_cycle, goal, true);
    res.suffix = *detail::path_digits(g, *on_cycle, g.accepting, false);
    return res;
  }
  if (!q.exclude_zero && detail::accepts(d, d.initial, q)) res.members.push_back(0);
  // Acyclic useful subgraph: enumerate accepted canonical words.
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> stack{{2 * d.initial, {}}};
  while (!stack.empty() && res.members.size() < list_cap) {
    auto [u, digits] = std::move(stack.back());
    stack.pop_back();
    for (auto [v, dig] : g.edges[u]) {
      if (!g.useful[v]) continue;
      auto next = digits;
      next.push_back(dig);
      if (g.accepting[v]) res.members.push_back(value_of_lsd(next, d.p));
      stack.push_back({v, std::move(next)});
    }
  }
  std::sort(res.members.begin(), res.members.end());
  return res;
}

struct PeriodicityResult {
  bool periodic = false;
  std::uint64_t period = 0;     // q
  std::uint64_t preperiod = 0;  // r
};

namespace detail {

// True iff the accept-set of d coincides with the ultimately periodic set
// whose membership on [0, r+q) is `window` and which repeats with period q from r on.
inline bool matches_periodic(const Dfao& d, const ResidueSetQuery& q, std::uint64_t period, std::uint64_t pre,
                             const std::vector<bool>& window) {
  const std::uint64_t p = d.p;
  auto member = [&](bool big, std::uint64_t exact, std::uint64_t vmod) {
    if (!big) return static_cast<bool>(window[exact]);
    const std::uint64_t off = (vmod + period - pre % period) % period;
    return static_cast<bool>(window[pre + off]);
  };
  using Key = std::tuple<std::size_t, bool, bool, std::uint64_t, std::uint64_t, std::uint64_t, bool, std::uint64_t>;
  // (state, last digit nonzero, value >= r, exact value if < r, value mod q, p^k mod q, p^k >= r, exact p^k if < r)
  std::set<Key> seen;
  std::vector<Key> todo;
  Key start{d.initial, false, pre == 0, 0, 0, 1 % period, 1 >= pre, pre == 0 ? 0 : 1};
  if (pre <= 1 && pre != 0) std::get<7>(start) = 1;
  todo.push_back(start);
  seen.insert(start);
  {
    bool in_set = !q.exclude_zero && accepts(d, d.initial, q);
    bool zero_in_window = member(pre == 0, 0, 0);
    if (in_set != zero_in_window) return false;
  }
  while (!todo.empty()) {
    auto [s, flag, big, exact, vmod, pkmod, pkbig, pk] = todo.back();
    todo.pop_back();
    for (std::uint32_t dig = 0; dig < p; ++dig) {
      bool nbig = big;
      std::uint64_t nexact = exact;
      if (!big && dig != 0) {
        if (pkbig) nbig = true;
        else {
          nexact = exact + dig * pk;
          if (nexact >= pre) nbig = true;
        }
      }
      if (nbig) nexact = 0;
      const std::uint64_t nvmod = (vmod + dig * pkmod) % period;
      const std::uint64_t npkmod = pkmod * p % period;
      bool npkbig = pkbig;
      std::uint64_t npk = pk;
      if (!pkbig) {
        npk = pk * p;
        if (npk >= pre) {
          npkbig = true;
          npk = 0;
        }
      }
      const std::size_t t = d.transitions[s][dig];
      const bool nflag = dig != 0;
      if (nflag) {
        const bool in_set = accepts(d, t, q);
        if (in_set != member(nbig, nexact, nvmod)) return false;
      }
      Key key{t, nflag, nbig, nexact, nvmod, npkmod, npkbig, npk};
      if (seen.insert(key).second) todo.push_back(key);
    }
  }
  return true;
}

}  // namespace detail

/// Searches periods q <= period_cap and preperiods r <= preperiod_cap for an
/// ultimately periodic description of S, testing each candidate exactly.
/// A negative answer only covers the caps.
inline PeriodicityResult decide_periodicity(const Dfao& d, const ResidueSetQuery& q, std::uint64_t period_cap,
                                            std::uint64_t preperiod_cap) {
  detail::check_query(d, q);
  if (period_cap < 1) fail(ErrorCode::Precondition, "period cap must be at least 1");
  for (std::uint64_t period = 1; period <= period_cap; ++period)
    for (std::uint64_t pre = 0; pre <= preperiod_cap; ++pre) {
      std::vector<bool> window(pre + period);
      for (std::uint64_t n = 0; n < pre + period; ++n)
        window[n] = (n == 0 && q.exclude_zero) ? false : evaluate(d, n) == q.target;
      if (detail::matches_periodic(d, q, period, pre, window)) return {true, period, pre};
    }
  return {false, 0, 0};
}

/// Graphviz rendering: nodes "Qi/value" in state order, parallel edges merged
/// with their digits listed in increasing order.
inline std::string export_dot(const Dfao& d) {
  std::ostringstream os;
  os << "digraph dfao {\n  rankdir=LR;\n  start [shape=point];\n";
  for (std::size_t s = 0; s < d.size(); ++s)
    os << "  Q" << s << " [shape=circle,label=\"Q" << s << "/" << d.output[s] << "\"];\n";
  os << "  start -> Q" << d.initial << ";\n";
  for (std::size_t s = 0; s < d.size(); ++s) {
    std::map<std::size_t, std::vector<std::uint32_t>> grouped;
    for (std::uint32_t dig = 0; dig < d.p; ++dig) grouped[d.transitions[s][dig]].push_back(dig);
    for (auto& [t, digs] : grouped) {
      os << "  Q" << s << " -> Q" << t << " [label=\"";
      for (std::size_t i = 0; i < digs.size(); ++i) os << (i ? "," : "") << digs[i];
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace diagfp
