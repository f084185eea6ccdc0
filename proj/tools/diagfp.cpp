// diagfp: command-line front end for the diagfp library.
//
// Exit codes: 0 success, 2 domain/input error, 3 budget exceeded,
// 4 verification failure. Errors are reported on stderr as "E_NAME: message".

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diagfp/diagfp.hpp"

using namespace diagfp;

namespace {

struct Config {
  std::size_t precision = 64;
  std::size_t state_budget = kDefaultMaxStates;
  std::size_t bit_budget = kDefaultBitBudget;
  std::string format = "text";
  int verbosity = 0;
};

// Settings come from the JSON file named by DIAGFP_CONFIG, when set.
Config load_config() {
  Config c;
  const char* path = std::getenv("DIAGFP_CONFIG");
  if (!path || !*path) return c;
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Precondition, std::string("cannot read config file ") + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Syntax, std::string("config file: ") + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("precision", c.precision);
  get("stateBudget", c.state_budget);
  get("bitBudget", c.bit_budget);
  get("format", c.format);
  get("verbosity", c.verbosity);
  if (c.precision == 0 || c.state_budget == 0 || c.bit_budget == 0)
    fail(ErrorCode::Precondition, "config budgets must be positive");
  return c;
}

// An argument naming an existing file is replaced by the file's text
// (lines starting with '#' are comments).
std::string read_expression(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::string line, out;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out += line + " ";
  }
  return out;
}

std::string pick_format(const std::string& requested, const Config& cfg, std::set<std::string> allowed,
                        const std::string& fallback = "text") {
  std::string f = requested.empty() ? cfg.format : requested;
  if (!allowed.count(f)) {
    // A config-wide default that does not apply here falls back to the command's own default.
    if (requested.empty()) return fallback;
    std::string list;
    for (auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    fail(ErrorCode::Precondition, "format " + f + " not available here (use " + list + ")");
  }
  return f;
}

std::vector<std::uint32_t> parse_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      fail(ErrorCode::Syntax, "bad list entry '" + item + "'");
    }
  }
  return out;
}

std::string join(const std::vector<std::uint32_t>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

// "f6", "g2", "R1", "catalan", "custom:<expr>"
struct FamilyArg {
  bool catalan = false;
  SequenceFamily family;
};

FamilyArg parse_family(const std::string& s) {
  FamilyArg f;
  if (s == "catalan") {
    f.catalan = true;
    return f;
  }
  if (s.rfind("custom:", 0) == 0) {
    f.family = SequenceFamily::custom(read_expression(s.substr(7)));
    return f;
  }
  if (s.size() >= 2 && (s[0] == 'f' || s[0] == 'g' || s[0] == 'R')) {
    unsigned param = 0;
    try {
      param = static_cast<unsigned>(std::stoul(s.substr(1)));
    } catch (const std::exception&) {
      fail(ErrorCode::Syntax, "bad family '" + s + "'");
    }
    f.family = s[0] == 'f' ? SequenceFamily::multinomial(param)
               : s[0] == 'g' ? SequenceFamily::binomial_power(param)
                             : SequenceFamily::rs_sum(param);
    f.family.validate();
    return f;
  }
  fail(ErrorCode::Syntax, "unknown family '" + s + "' (f<r>, g<r>, R<s>, catalan, custom:<expr>)");
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Budget:
    case ErrorCode::StateBudget:
    case ErrorCode::BitBudget: return 3;
    case ErrorCode::VerifyFail:
    case ErrorCode::CertFail: return 4;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonals of rational functions over prime fields"};
  app.require_subcommand(1);
  std::string emit;
  std::uint32_t p = 0;

  // diag
  auto* diag = app.add_subcommand("diag", "Print the first coefficients of a diagonal mod p");
  std::string diag_expr, diag_mode = "full";
  std::size_t diag_order = 0;
  diag->add_option("expr", diag_expr, "Rational function or file")->required();
  diag->add_option("--p", p, "Prime")->required();
  diag->add_option("--order", diag_order, "Number of coefficients");
  diag->add_option("--mode", diag_mode, "full|half|lastpair")->check(CLI::IsMember({"full", "half", "lastpair"}));
  diag->add_option("--emit", emit, "text|json|csv");

  // annihilate
  auto* ann = app.add_subcommand("annihilate", "Ore-form annihilator of a diagonal");
  std::string ann_expr;
  std::size_t rank_precision = kDefaultRankPrecision, verify_order = 0;
  ann->add_option("expr", ann_expr, "Rational function or file")->required();
  ann->add_option("--p", p, "Prime")->required();
  ann->add_option("--rank-precision", rank_precision, "Truncation for the kernel rank");
  ann->add_option("--verify-order", verify_order, "Minimum verification order");
  ann->add_option("--emit", emit, "text|json");

  // automaton
  auto* aut = app.add_subcommand("automaton", "Automaton generating a diagonal mod p");
  std::string aut_expr;
  bool aut_minimize = false;
  std::vector<std::uint64_t> aut_eval;
  aut->add_option("expr", aut_expr, "Rational function or file")->required();
  aut->add_option("--p", p, "Prime")->required();
  aut->add_flag("--minimize", aut_minimize, "Minimize before output");
  aut->add_option("--evaluate", aut_eval, "Evaluate at these n instead of printing the automaton");
  aut->add_option("--emit", emit, "text|json|dot");

  // decide
  auto* dec = app.add_subcommand("decide", "Decide emptiness, finiteness or periodicity of {n : a(n) = b}");
  std::string dec_kind, dec_expr;
  std::uint32_t dec_b = 0;
  bool exclude_zero = false;
  std::uint64_t period_cap = 10, preperiod_cap = 10;
  dec->add_option("property", dec_kind, "empty|finite|periodic")->required()->check(CLI::IsMember({"empty", "finite", "periodic"}));
  dec->add_option("expr", dec_expr, "Rational function or file")->required();
  dec->add_option("--p", p, "Prime")->required();
  dec->add_option("--b", dec_b, "Target residue")->required();
  dec->add_flag("--exclude-zero", exclude_zero, "Restrict to n >= 1");
  dec->add_option("--period-cap", period_cap, "Largest period tried");
  dec->add_option("--preperiod-cap", preperiod_cap, "Largest preperiod tried");
  dec->add_option("--emit", emit, "text|json");

  // rationalize
  auto* rat = app.add_subcommand("rationalize", "Rational R(x,y) whose diagonal is an algebraic series");
  std::string rat_poly, rat_prefix;
  std::size_t check_order = 200;
  rat->add_option("--poly", rat_poly, "P(x,y) with P(x,f) = 0")->required();
  rat->add_option("--prefix", rat_prefix, "Comma-separated leading coefficients of f")->required();
  rat->add_option("--p", p, "Prime")->required();
  rat->add_option("--check-order", check_order, "Certificate order");
  rat->add_option("--emit", emit, "text|json");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Evaluate the explicit degree/height bounds");
  bnd->set_help_flag("--help", "Print this help message and exit");
  std::uint64_t bn = 1, bd = 1, bh = 1, bk = 0, bm = 0, bp = 0, bdc = 0;
  std::string lemma = "rationalization", bmode = "exact", bdegrees, bheights;
  bool strict = false;
  bnd->add_option("--lemma", lemma, "rationalization|final|direct|sumprod|tails|diag")
      ->check(CLI::IsMember({"rationalization", "final", "direct", "sumprod", "tails", "diag"}));
  bnd->add_option("--n", bn, "Number of variables of f");
  bnd->add_option("--d", bd, "Degree");
  bnd->add_option("--h", bh, "Height");
  bnd->add_option("--k", bk, "Index k (tails)");
  bnd->add_option("--m", bm, "Variables of R (direct)");
  bnd->add_option("--p", bp, "Prime (final, direct); implies --lemma final when given alone");
  bnd->add_option("--degrees", bdegrees, "Comma-separated degrees (sumprod)");
  bnd->add_option("--heights", bheights, "Comma-separated heights (sumprod)");
  bnd->add_option("--dc", bdc, "Coefficient degree cap (sumprod)");
  bnd->add_option("--mode", bmode, "exact|log2")->check(CLI::IsMember({"exact", "log2"}));
  bnd->add_flag("--strict", strict, "Fail with E_BIT_BUDGET instead of falling back to log2");
  bnd->add_option("--emit", emit, "text|json");

  // lucas
  auto* luc = app.add_subcommand("lucas", "Check the Lucas property and the Frobenius factorization");
  std::string luc_family;
  std::size_t n_cap = 50, j_cap = 1000, factor_order = 0;
  luc->add_option("family", luc_family, "f<r>|g<r>|R<s>|catalan|custom:<expr>")->required();
  luc->add_option("--p", p, "Prime")->required();
  luc->add_option("--n-cap", n_cap, "n < n_cap");
  luc->add_option("--j-cap", j_cap, "j < min(p, j_cap)");
  luc->add_option("--factor-order", factor_order, "Also check f = A(x) f(x^p) to this order");
  luc->add_option("--emit", emit, "text|json");

  // survey
  auto* sur = app.add_subcommand("survey", "Annihilator ranks of a family across primes (CSV)");
  std::string sur_family, sur_primes;
  bool deterministic = false;
  sur->add_option("family", sur_family, "f<r>|g<r>|R<s>|custom:<expr>")->required();
  sur->add_option("--primes", sur_primes, "Comma-separated primes")->required();
  sur->add_flag("--deterministic", deterministic, "Report millis as 0 for byte-identical output");
  sur->add_option("--emit", emit, "csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const Config cfg = load_config();
    std::ostream& out = std::cout;

    if (*diag) {
      const auto fmt = pick_format(emit, cfg, {"text", "json", "csv"});
      const auto rf = parse_rational(read_expression(diag_expr), p);
      const std::size_t order = diag_order ? diag_order : cfg.precision;
      const DiagonalSpec spec{diag_mode == "full" ? DiagonalMode::Full
                              : diag_mode == "half" ? DiagonalMode::Half
                                                    : DiagonalMode::LastPair,
                              rf.nvars()};
      spec.validate();
      std::vector<std::uint32_t> coeffs;
      if (spec.mode == DiagonalMode::Full) {
        // The automaton gives exact coefficients without a dense expansion.
        coeffs = diagonal_prefix(synthesize_dfao(rf, cfg.state_budget), order).coefficients();
      } else {
        auto d = apply_diagonal(spec, series_expand(rf, order), order);
        if (d.nvars() != 1) fail(ErrorCode::DimMismatch, "text output needs a univariate diagonal; use --mode full");
        coeffs = d.coefficients();
      }
      if (fmt == "json") out << Json{{"p", p}, {"order", order}, {"coefficients", coeffs}}.dump() << "\n";
      else if (fmt == "csv") {
        out << "n,coefficient\n";
        for (std::size_t n = 0; n < coeffs.size(); ++n) out << n << "," << coeffs[n] << "\n";
      } else out << join(coeffs) << "\n";
    } else if (*ann) {
      const auto fmt = pick_format(emit, cfg, {"text", "json"});
      const auto rf = parse_rational(read_expression(ann_expr), p);
      AnnihilatorOptions opts;
      opts.rank_precision = rank_precision;
      opts.verify_order = verify_order;
      opts.max_states = cfg.state_budget;
      const auto a = find_annihilator(rf, opts);
      if (fmt == "json") out << to_json(a).dump(2) << "\n";
      else {
        out << "p = " << a.p << ", r = " << a.r() << ", verified to order " << a.verified_to_order << "\n";
        for (std::size_t i = 0; i < a.coefficients.size(); ++i)
          out << "Q" << i << " = " << render(a.coefficients[i].to_multipoly(1, 0)) << "\n";
      }
    } else if (*aut) {
      const auto fmt = pick_format(emit, cfg, {"text", "json", "dot"});
      auto d = synthesize_dfao(parse_rational(read_expression(aut_expr), p), cfg.state_budget);
      if (aut_minimize) d = minimize(d);
      if (!aut_eval.empty()) {
        std::vector<std::uint32_t> vals;
        for (auto n : aut_eval) vals.push_back(evaluate(d, n));
        out << join(vals) << "\n";
      } else if (fmt == "json") out << to_json(d).dump() << "\n";
      else if (fmt == "dot") out << export_dot(d);
      else {
        out << "states " << d.size() << ", initial Q" << d.initial << "\n";
        for (std::size_t s = 0; s < d.size(); ++s) {
          out << "Q" << s << "/" << d.output[s] << ":";
          for (auto t : d.transitions[s]) out << " Q" << t;
          out << "\n";
        }
      }
    } else if (*dec) {
      const auto fmt = pick_format(emit, cfg, {"text", "json"});
      const auto d = minimize(synthesize_dfao(parse_rational(read_expression(dec_expr), p), cfg.state_budget));
      const ResidueSetQuery q{dec_b, exclude_zero};
      Json j = {{"property", dec_kind}, {"b", dec_b}, {"excludeZero", exclude_zero}};
      std::string text;
      if (dec_kind == "empty") {
        const auto r = decide_emptiness(d, q);
        j["empty"] = r.empty;
        if (!r.empty) j["witness"] = r.witness;
        text = r.empty ? "empty" : "nonempty witness=" + std::to_string(r.witness);
      } else if (dec_kind == "finite") {
        const auto r = decide_finiteness(d, q);
        j["finite"] = r.finite;
        if (r.finite) {
          j["members"] = r.members;
          text = "finite {";
          for (std::size_t i = 0; i < r.members.size(); ++i) text += (i ? "," : "") + std::to_string(r.members[i]);
          text += "}";
        } else {
          j["prefix"] = r.prefix;
          j["cycle"] = r.cycle;
          j["suffix"] = r.suffix;
          text = "infinite prefix=[" + join(r.prefix, ",") + "] cycle=[" + join(r.cycle, ",") + "] suffix=[" +
                 join(r.suffix, ",") + "] (digits least significant first)";
        }
      } else {
        const auto r = decide_periodicity(d, q, period_cap, preperiod_cap);
        j["periodic"] = r.periodic;
        if (r.periodic) {
          j["period"] = r.period;
          j["preperiod"] = r.preperiod;
          text = "periodic(" + std::to_string(r.period) + "," + std::to_string(r.preperiod) + ")";
        } else {
          j["periodCap"] = period_cap;
          j["preperiodCap"] = preperiod_cap;
          text = "not_periodic_within(" + std::to_string(period_cap) + "," + std::to_string(preperiod_cap) + ")";
        }
      }
      if (fmt == "json") out << j.dump() << "\n";
      else out << text << "\n";
    } else if (*rat) {
      const auto fmt = pick_format(emit, cfg, {"text", "json"});
      PrimeField field(p);
      auto prefix = parse_list(rat_prefix);
      for (auto& v : prefix) v %= p;
      AlgebraicSeriesSpec spec{parse_polynomial(read_expression(rat_poly), p, 2),
                               TruncatedSeries::univariate(field, prefix)};
      const auto res = rationalize_univariate(spec, check_order);
      if (fmt == "json") {
        out << Json{{"R", render(res.R)}, {"certificate", to_json(res.certificate)}}.dump(2) << "\n";
      } else {
        out << "R = " << render(res.R) << "\n";
        out << "shift i = " << res.certificate.shift << ", Q = "
            << render(UniPoly(field, res.certificate.poly_part).to_multipoly(1, 0)) << "\n";
        out << "height " << res.certificate.height_actual << " <= "
            << render_bound(res.certificate.height_budget, BoundMode::Exact) << ", verified to order "
            << res.certificate.verified_to_order << "\n";
      }
    } else if (*bnd) {
      const auto fmt = pick_format(emit, cfg, {"text", "json"});
      BoundContext ctx(bmode == "exact" ? BoundMode::Exact : BoundMode::Log2, cfg.bit_budget, strict);
      if (bp && lemma == "rationalization") lemma = "final";
      BoundReport rep;
      if (lemma == "rationalization") rep = bound_rationalization(bn, bd, bh, ctx);
      else if (lemma == "final") {
        if (!bp) fail(ErrorCode::Precondition, "--lemma final needs --p");
        rep = bound_final(bn, bd, bh, bp, ctx);
      } else if (lemma == "direct") {
        if (!bp || !bm) fail(ErrorCode::Precondition, "--lemma direct needs --m and --p");
        rep = bound_rational_direct(bm, bh, bp, ctx);
      } else if (lemma == "diag") rep = bound_lemma_diag(bd, bh, ctx);
      else if (lemma == "tails") {
        const auto t = bound_valuation_and_tails(bd, bh, bk, ctx);
        rep.mode = ctx.mode();
        rep.inputs = {{"d", bd}, {"h", bh}, {"k", bk}};
        rep.trace = {{"nuCap", t.nu_cap},
                     {"shiftedHeight", t.shifted_height},
                     {"coefficientDegree", t.coefficient_degree},
                     {"coefficientHeight", t.coefficient_height},
                     {"tailDegree", t.tail_degree},
                     {"tailHeight", t.tail_height}};
        rep.warnings = ctx.warnings();
      } else {
        std::vector<std::uint64_t> degs, hts;
        for (auto v : parse_list(bdegrees)) degs.push_back(v);
        for (auto v : parse_list(bheights)) hts.push_back(v);
        const auto b = bound_sum_product(degs, hts, bdc);
        rep.mode = ctx.mode();
        rep.inputs = {{"m", degs.size()}, {"dc", bdc}};
        rep.trace = {{"sumDegree", b.sum_degree},
                     {"sumHeight", b.sum_height},
                     {"productDegree", b.product_degree},
                     {"productHeight", b.product_height}};
      }
      for (auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
      if (fmt == "json") out << to_json(rep).dump(2) << "\n";
      else
        for (auto& [name, v] : rep.trace) out << name << " = " << render_bound(v, rep.mode) << "\n";
    } else if (*luc) {
      const auto fmt = pick_format(emit, cfg, {"text", "json"});
      const auto fam = parse_family(luc_family);
      const std::size_t need = std::max<std::size_t>(p * n_cap + p, factor_order);
      const auto seq = fam.catalan ? catalan_mod(need, p) : family_coefficients(fam.family, need, p);
      const auto r = lucas_check(seq, p, n_cap, j_cap);
      Json j = {{"family", luc_family}, {"p", p}, {"lucas", r.pass}};
      std::string text = r.pass ? "lucas pass" : "lucas fail n=" + std::to_string(r.n) + " j=" + std::to_string(r.j);
      if (!r.pass) j["counterexample"] = {{"n", r.n}, {"j", r.j}};
      if (factor_order) {
        const auto f = frobenius_factor_check(seq, p, factor_order);
        j["factor"] = f.pass;
        if (!f.pass) j["factorFailOrder"] = f.fail_order;
        text += f.pass ? "\nfactor pass" : "\nfactor fail order=" + std::to_string(f.fail_order);
      }
      if (fmt == "json") out << j.dump() << "\n";
      else out << text << "\n";
    } else if (*sur) {
      const auto fmt = pick_format(emit, cfg, {"csv", "json"}, "csv");
      const auto fam = parse_family(sur_family);
      if (fam.catalan) fail(ErrorCode::Precondition, "catalan is not given as a rational diagonal here");
      SurveyOptions opts;
      opts.annihilator.max_states = cfg.state_budget;
      opts.record_time = !deterministic;
      const auto rows = degree_survey(fam.family, parse_list(sur_primes), opts);
      if (fmt == "json") {
        Json arr = Json::array();
        for (auto& r : rows)
          arr.push_back({{"family", r.family},      {"param", r.param},        {"p", r.p},
                         {"complete", r.complete},  {"rank", r.rank},          {"oreDegrees", r.ore_degrees},
                         {"lowerRef", r.lower_ref}, {"upperRefLog2", r.upper_ref_log2}, {"states", r.states},
                         {"millis", r.millis},      {"note", r.note}});
        out << arr.dump(2) << "\n";
      } else out << survey_csv(rows);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "E_PRECONDITION: " << e.what() << "\n";
    return 2;
  }
}
