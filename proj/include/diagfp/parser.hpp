#pragma once

#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "diagfp/rational.hpp"

namespace diagfp {

namespace detail {

struct Token {
  enum Kind { Number, Var, Op, LParen, RParen, End } kind;
  std::string text;
  std::size_t var = 0;  // 0-based variable index for Var
  std::size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, std::string(s.substr(i, j - i)), 0, i});
      i = j;
      continue;
    }
    if (c == 'x' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      auto idx = std::stoul(std::string(s.substr(i + 1, j - i - 1)));
      if (idx < 1 || idx > kMaxVars) fail(ErrorCode::Syntax, "variable index out of range at " + std::to_string(i));
      out.push_back({Token::Var, std::string(s.substr(i, j - i)), idx - 1, i});
      i = j;
      continue;
    }
    if (c == 'x' || c == 'y' || c == 'z' || c == 't') {
      if (i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1])))
        fail(ErrorCode::Syntax, "unknown identifier at " + std::to_string(i));
      std::size_t idx = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : 3;
      out.push_back({Token::Var, std::string(1, c), idx, i});
      ++i;
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({Token::Op, std::string(1, c), 0, i});
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::LParen, "(", 0, i++});
      continue;
    }
    if (c == ')') {
      out.push_back({Token::RParen, ")", 0, i++});
      continue;
    }
    fail(ErrorCode::Syntax, std::string("unexpected character '") + c + "' at " + std::to_string(i));
  }
  out.push_back({Token::End, "", 0, s.size()});
  return out;
}

struct Fraction {
  MultiPoly num;
  MultiPoly den;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const PrimeField& field, std::size_t nvars)
      : toks_(std::move(tokens)), field_(field), nvars_(nvars) {}

  Fraction parse() {
    auto f = expr();
    if (peek().kind != Token::End) error("trailing input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept_op(char op) {
    if (peek().kind == Token::Op && peek().text[0] == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Syntax, what + " at position " + std::to_string(peek().pos));
  }

  Fraction expr() {
    auto acc = term();
    for (;;) {
      if (accept_op('+')) {
        auto r = term();
        acc = {acc.num * r.den + r.num * acc.den, acc.den * r.den};
      } else if (accept_op('-')) {
        auto r = term();
        acc = {acc.num * r.den - r.num * acc.den, acc.den * r.den};
      } else {
        return acc;
      }
    }
  }

  Fraction term() {
    auto acc = unary();
    for (;;) {
      if (accept_op('*')) {
        auto r = unary();
        acc = {acc.num * r.num, acc.den * r.den};
      } else if (accept_op('/')) {
        auto r = unary();
        if (r.num.is_zero()) fail(ErrorCode::NotExpandable, "division by zero (mod p)");
        acc = {acc.num * r.den, acc.den * r.num};
      } else {
        return acc;
      }
    }
  }

  Fraction unary() {
    if (accept_op('-')) {
      auto f = unary();
      return {-f.num, f.den};
    }
    if (accept_op('+')) return unary();
    return power();
  }

  Fraction power() {
    auto base = primary();
    if (accept_op('^')) {
      if (peek().kind != Token::Number) error("exponent must be a nonnegative integer");
      const auto& text = peek().text;
      if (text.size() > 9) error("exponent too large");
      auto k = std::stoull(text);
      ++pos_;
      if (peek().kind == Token::Op && peek().text[0] == '^') error("chained exponent");
      return {base.num.pow(k), base.den.pow(k)};
    }
    return base;
  }

  Fraction primary() {
    const auto& t = peek();
    switch (t.kind) {
      case Token::Number: {
        std::uint64_t v = 0;
        for (char c : t.text) v = (v * 10 + static_cast<unsigned>(c - '0')) % field_.prime();
        ++pos_;
        return {MultiPoly::constant(field_, nvars_, static_cast<std::int64_t>(v)), one()};
      }
      case Token::Var: {
        ++pos_;
        return {MultiPoly::variable(field_, nvars_, t.var), one()};
      }
      case Token::LParen: {
        ++pos_;
        auto f = expr();
        if (peek().kind != Token::RParen) error("expected ')'");
        ++pos_;
        return f;
      }
      default:
        error("expected a number, variable or '('");
    }
  }

  MultiPoly one() const { return MultiPoly::constant(field_, nvars_, 1); }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  PrimeField field_;
  std::size_t nvars_;
};

inline std::string render_poly(const MultiPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool any_var = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      if (!m[i]) continue;
      if (any_var) mono << '*';
      mono << 'x' << (i + 1);
      if (m[i] > 1) mono << '^' << m[i];
      any_var = true;
    }
    if (!any_var) {
      os << c;
    } else if (c == 1) {
      os << mono.str();
    } else {
      os << c << '*' << mono.str();
    }
  }
  return os.str();
}

}  // namespace detail

/// Parses an expression over x1..x12 (aliases x, y, z, t) with + - * / ^ and
/// parentheses into a normalized P/Q. The variable count is the largest index
/// used (at least `min_vars`). Integer literals are reduced mod p.
inline RationalFunction parse_rational(std::string_view text, std::uint64_t p, std::size_t min_vars = 1) {
  PrimeField field(p);
  auto tokens = detail::tokenize(text);
  std::size_t nvars = std::max<std::size_t>(min_vars, 1);
  for (auto& t : tokens)
    if (t.kind == detail::Token::Var) nvars = std::max(nvars, t.var + 1);
  detail::Parser parser(std::move(tokens), field, nvars);
  auto frac = parser.parse();
  return RationalFunction(std::move(frac.num), std::move(frac.den));
}

/// Parses a polynomial expression; division is allowed only by nonzero constants.
inline MultiPoly parse_polynomial(std::string_view text, std::uint64_t p, std::size_t min_vars = 1) {
  PrimeField field(p);
  auto tokens = detail::tokenize(text);
  std::size_t nvars = std::max<std::size_t>(min_vars, 1);
  for (auto& t : tokens)
    if (t.kind == detail::Token::Var) nvars = std::max(nvars, t.var + 1);
  detail::Parser parser(std::move(tokens), field, nvars);
  auto frac = parser.parse();
  if (frac.den.total_degree() != 0) fail(ErrorCode::Syntax, "expected a polynomial, got a proper fraction");
  return frac.num.scaled(field.inv(frac.den.constant_term()));
}

inline std::string render(const MultiPoly& f) { return detail::render_poly(f); }

/// Canonical text form "(P)/(Q)" that parse_rational reads back unchanged.
inline std::string render(const RationalFunction& r) {
  return "(" + detail::render_poly(r.numerator()) + ")/(" + detail::render_poly(r.denominator()) + ")";
}

}  // namespace diagfp
