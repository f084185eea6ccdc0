#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "diagfp/annihilator.hpp"
#include "diagfp/automaton.hpp"
#include "diagfp/bounds.hpp"
#include "diagfp/rationalize.hpp"

namespace diagfp {

using Json = nlohmann::ordered_json;

namespace detail {

// Integers that fit 64 bits stay numeric, larger ones become decimal strings.
inline Json big_to_json(const mpz_class& v) {
  if (v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof out, 0, 0, v.get_mpz_t());
    return out;
  }
  return v.get_str();
}

inline mpz_class big_from_json(const Json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return mpz_class(std::to_string(j.get<std::int64_t>()));
  fail(ErrorCode::Syntax, "expected a nonnegative integer");
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::Syntax, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Syntax, std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const OreAnnihilator& a) {
  Json coeffs = Json::array();
  for (auto& q : a.coefficients) coeffs.push_back(q.coeffs());
  return Json{{"p", a.p},
              {"r", a.r()},
              {"coefficients", coeffs},
              {"degreeBound", detail::big_to_json(a.degree_bound)},
              {"heightBound", detail::big_to_json(a.height_bound)},
              {"verifiedToOrder", a.verified_to_order}};
}

/// The loaded annihilator is marked unverified; run verify_annihilator to
/// re-establish the recorded order.
inline OreAnnihilator annihilator_from_json(const Json& j) {
  OreAnnihilator a;
  a.p = detail::required<std::uint32_t>(j, "p");
  PrimeField field(a.p);
  for (auto& c : detail::required<std::vector<std::vector<std::uint32_t>>>(j, "coefficients")) {
    for (auto v : c)
      if (v >= a.p) fail(ErrorCode::Syntax, "coefficient outside F_p");
    a.coefficients.emplace_back(field, c);
  }
  if (a.coefficients.size() < 2) fail(ErrorCode::Syntax, "an annihilator needs r >= 1");
  if (detail::required<std::size_t>(j, "r") != a.r()) fail(ErrorCode::Syntax, "r disagrees with the coefficient count");
  a.degree_bound = detail::big_from_json(j.at("degreeBound"));
  a.height_bound = detail::big_from_json(j.at("heightBound"));
  a.verified_to_order = detail::required<std::size_t>(j, "verifiedToOrder");
  a.verified = false;
  return a;
}

inline Json to_json(const Dfao& d) {
  Json states = Json::array();
  for (std::size_t s = 0; s < d.size(); ++s) states.push_back({{"id", s}, {"output", d.output[s]}});
  return Json{{"p", d.p}, {"states", states}, {"initial", d.initial}, {"transitions", d.transitions}};
}

inline Dfao dfao_from_json(const Json& j) {
  Dfao d;
  d.p = detail::required<std::uint32_t>(j, "p");
  d.initial = detail::required<std::size_t>(j, "initial");
  const auto states = detail::required<Json>(j, "states");
  if (!states.is_array()) fail(ErrorCode::Syntax, "states must be an array");
  d.output.assign(states.size(), 0);
  std::vector<bool> seen(states.size(), false);
  for (auto& s : states) {
    const auto id = detail::required<std::size_t>(s, "id");
    if (id >= states.size() || seen[id]) fail(ErrorCode::Syntax, "state ids must be 0..n-1 without repeats");
    seen[id] = true;
    d.output[id] = detail::required<std::uint32_t>(s, "output");
  }
  d.transitions = detail::required<std::vector<std::vector<std::size_t>>>(j, "transitions");
  d.validate();
  return d;
}

inline Json to_json(const RationalizationCertificate& c) {
  Json budget = c.height_budget.is_exact() ? detail::big_to_json(c.height_budget.exact()) : Json(render_bound(c.height_budget, BoundMode::Log2));
  return Json{{"heightBudget", budget},
              {"heightActual", c.height_actual},
              {"verifiedToOrder", c.verified_to_order},
              {"shift", {{"i", c.shift}, {"polyPart", c.poly_part}}}};
}

inline Json to_json(const BoundValue& v, BoundMode mode) {
  Json out = Json::object();
  if (mode == BoundMode::Exact && v.is_exact()) out["exact"] = v.exact().get_str();
  const double l = v.log2_upper();
  if (std::isfinite(l)) out["log2Upper"] = l;
  else out["tower"] = {{"level", v.upper().level}, {"top", v.upper().top}};
  return out;
}

inline Json to_json(const BoundReport& r) {
  Json inputs = Json::object();
  for (auto& [k, v] : r.inputs) inputs[k] = v;
  Json trace = Json::array();
  for (auto& [name, v] : r.trace) {
    Json e = {{"name", name}};
    e.update(to_json(v, r.mode));
    trace.push_back(std::move(e));
  }
  return Json{{"mode", r.mode == BoundMode::Exact ? "exact" : "log2"},
              {"inputs", inputs},
              {"trace", trace},
              {"warnings", r.warnings}};
}

}  // namespace diagfp
