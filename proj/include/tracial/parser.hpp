#pragma once

// Recursive-descent parser for the term and formula text grammar.
//
//   formula   := quant | additive
//   quant     := ("sup" | "inf") var ("," var)* "." formula
//   additive  := mult (("+" | "-.") mult)*
//   mult      := unary ("*" unary)*
//   unary     := NUMBER [unary]            -- Scale(q, f) or Const(q)
//              | primary
//   primary   := "(" formula ")" | quant
//              | ("norm2" | "trRe" | "trIm") "(" term ")"
//              | ("max" | "min") "(" formula "," formula ")"
//              | "half" "(" formula ")"
//
//   term      := tprod (("+" | "-") tprod)*
//   tprod     := tunary (["*"] tunary)*    -- juxtaposition multiplies
//   tunary    := "-" tunary | scalar [tunary] | tpostfix
//   tpostfix  := tprimary "'"*
//   tprimary  := var | "(" term ")"
//   scalar    := NUMBER | "[" ["-"] NUMBER "," ["-"] NUMBER "]"
//   var       := "x" DIGITS
//
// NUMBER is an integer, p/q, or a decimal. In term position a bare 1 is the
// unit, a bare 0 is zero, and any other bare scalar q is q * 1.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/formula.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"

namespace tracial {

namespace detail {

enum class Tok { Var, Ident, Number, Plus, Minus, DotMinus, Star, Prime, LParen, RParen, LBracket, RBracket, Comma, Dot, End };

inline std::string describe(Tok t) {
  switch (t) {
    case Tok::Var: return "variable";
    case Tok::Ident: return "keyword";
    case Tok::Number: return "number";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::DotMinus: return "'-.'";
    case Tok::Star: return "'*'";
    case Tok::Prime: return "'''";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (is_digit(i)) ++i;
      if (i < s.size() && (s[i] == '/' || s[i] == '.') && is_digit(i + 1)) {
        ++i;
        while (is_digit(i)) ++i;
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
      std::string word(s.substr(start, i - start));
      bool is_var = word.size() > 1 && word[0] == 'x';
      for (std::size_t k = 1; is_var && k < word.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(word[k]))) is_var = false;
      out.push_back({is_var ? Tok::Var : Tok::Ident, word, start});
      continue;
    }
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '.') {
          kind = Tok::DotMinus;
          len = 2;
        } else {
          kind = Tok::Minus;
        }
        break;
      case '*': kind = Tok::Star; break;
      case '\'': kind = Tok::Prime; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      default:
        throw SyntaxError(start, {}, "unexpected character '" + std::string(1, c) + "' at position " + std::to_string(start));
    }
    out.push_back({kind, std::string(s.substr(start, len)), start});
    i += len;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula formula_input() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term term_input() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "syntax error at position " + std::to_string(t.pos) + ": found " +
                      (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'") + ", expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) msg += (k ? " or " : "") + expected[k];
    throw SyntaxError(t.pos, std::move(expected), msg);
  }

  Token expect(Tok k) {
    if (!at(k)) fail({describe(k)});
    return take();
  }

  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  int var_index(const Token& t) const {
    try {
      int v = std::stoi(t.text.substr(1));
      if (v >= 1) return v;
    } catch (const std::out_of_range&) {
    }
    throw SyntaxError(t.pos, {"variable x1, x2, ..."}, "invalid variable '" + t.text + "' at position " + std::to_string(t.pos));
  }

  // ---- formulas ----

  bool starts_formula_primary() const {
    if (at(Tok::LParen) || at(Tok::Number)) return true;
    if (!at(Tok::Ident)) return false;
    const std::string& w = peek().text;
    return w == "sup" || w == "inf" || w == "norm2" || w == "trRe" || w == "trIm" || w == "max" || w == "min" ||
           w == "half";
  }

  Formula formula() {
    if (at_ident("sup") || at_ident("inf")) return quantified();
    return additive();
  }

  Formula quantified() {
    const bool is_sup = take().text == "sup";
    std::vector<int> vars;
    if (!at(Tok::Var)) fail({"variable"});
    vars.push_back(var_index(take()));
    while (at(Tok::Comma)) {
      take();
      if (!at(Tok::Var)) fail({"variable"});
      vars.push_back(var_index(take()));
    }
    while (at(Tok::Var)) vars.push_back(var_index(take()));
    expect(Tok::Dot);
    Formula body = formula();
    return is_sup ? Formula::sup(std::move(vars), std::move(body)) : Formula::inf(std::move(vars), std::move(body));
  }

  Formula additive() {
    Formula lhs = multiplicative();
    while (at(Tok::Plus) || at(Tok::DotMinus)) {
      const bool plus = take().kind == Tok::Plus;
      Formula rhs = multiplicative();
      lhs = plus ? Formula::add(std::move(lhs), std::move(rhs)) : Formula::dotminus(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula multiplicative() {
    Formula lhs = unary();
    while (at(Tok::Star)) {
      take();
      lhs = Formula::mul(std::move(lhs), unary());
    }
    return lhs;
  }

  Formula unary() {
    if (at(Tok::Minus)) {
      const Token& minus = peek();
      if (peek(1).kind == Tok::Number)
        throw SyntaxError(minus.pos, {"non-negative number"},
                          "negative scaling in formula position at position " + std::to_string(minus.pos),
                          "scale-negative");
      fail({"formula"});
    }
    if (at(Tok::Number)) {
      Rational q = parse_rational(take().text);
      if (starts_formula_primary()) return Formula::scale(std::move(q), unary());
      return Formula::constant(std::move(q));
    }
    return formula_primary();
  }

  Formula formula_primary() {
    if (at(Tok::LParen)) {
      take();
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
    if (!at(Tok::Ident)) fail({"'('", "number", "norm2", "trRe", "trIm", "max", "min", "half", "sup", "inf"});
    const std::string w = peek().text;
    if (w == "sup" || w == "inf") return quantified();
    if (w == "norm2" || w == "trRe" || w == "trIm") {
      take();
      expect(Tok::LParen);
      Term t = term();
      expect(Tok::RParen);
      if (w == "norm2") return Formula::norm2(std::move(t));
      if (w == "trRe") return Formula::trace_re(std::move(t));
      return Formula::trace_im(std::move(t));
    }
    if (w == "max" || w == "min") {
      take();
      expect(Tok::LParen);
      Formula a = formula();
      expect(Tok::Comma);
      Formula b = formula();
      expect(Tok::RParen);
      return w == "max" ? Formula::max(std::move(a), std::move(b)) : Formula::min(std::move(a), std::move(b));
    }
    if (w == "half") {
      take();
      expect(Tok::LParen);
      Formula a = formula();
      expect(Tok::RParen);
      return Formula::half(std::move(a));
    }
    fail({"norm2", "trRe", "trIm", "max", "min", "half", "sup", "inf"});
  }

  // ---- terms ----

  bool starts_term_unary() const {
    return at(Tok::Var) || at(Tok::LParen) || at(Tok::Number) || at(Tok::LBracket);
  }

  Term term() {
    Term lhs = term_product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const bool plus = take().kind == Tok::Plus;
      Term rhs = term_product();
      if (!plus) rhs = Term::scale(ComplexRational(Rational(-1)), std::move(rhs));
      lhs = Term::sum(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Term term_product() {
    Term lhs = term_unary();
    while (true) {
      if (at(Tok::Star)) {
        take();
        lhs = Term::prod(std::move(lhs), term_unary());
      } else if (starts_term_unary()) {
        lhs = Term::prod(std::move(lhs), term_unary());
      } else {
        return lhs;
      }
    }
  }

  Rational signed_number() {
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    if (!at(Tok::Number)) fail({"number"});
    Rational q = parse_rational(take().text);
    return neg ? Rational(-q) : q;
  }

  Term scaled(ComplexRational q) {
    if (starts_term_unary()) return Term::scale(std::move(q), term_unary());
    if (q.is_real() && q.re == 1) return Term::one();
    if (q.is_real() && q.re == 0) return Term::zero();
    return Term::scale(std::move(q), Term::one());
  }

  Term term_unary() {
    if (at(Tok::Minus)) {
      if (peek(1).kind == Tok::Number) return scaled(ComplexRational(signed_number()));
      take();
      return Term::scale(ComplexRational(Rational(-1)), term_unary());
    }
    if (at(Tok::Number)) return scaled(ComplexRational(signed_number()));
    if (at(Tok::LBracket)) {
      take();
      Rational re = signed_number();
      expect(Tok::Comma);
      Rational im = signed_number();
      expect(Tok::RBracket);
      return scaled(ComplexRational(std::move(re), std::move(im)));
    }
    Term t = term_primary();
    while (at(Tok::Prime)) {
      take();
      t = Term::adjoint(std::move(t));
    }
    return t;
  }

  Term term_primary() {
    if (at(Tok::Var)) return Term::var(var_index(take()));
    if (at(Tok::LParen)) {
      take();
      Term t = term();
      expect(Tok::RParen);
      return t;
    }
    fail({"variable", "'('", "number", "'['", "'-'"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Throws SyntaxError (code "syntax-error" or "scale-negative") with the
/// offending byte position and the set of expected tokens.
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).formula_input(); }

inline Term parse_term(std::string_view text) { return detail::Parser(text).term_input(); }

}  // namespace tracial
