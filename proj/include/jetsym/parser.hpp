#pragma once

// Recursive-descent parser for the expression DSL:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Jet coordinates are written name_suffix (u_xy); derivatives of opaque
// functions carry 1-based argument slots: f_;2,4(t, x, y, u).

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/expression.hpp"
#include "jetsym/jet_space.hpp"

namespace jetsym {

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const JetSpace& space, bool allow_basis)
      : text_(text), space_(space), allow_basis_(allow_basis) {}

  Expression parse_all() {
    Expression e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expression parse_expr() {
    Expression e = parse_term();
    while (true) {
      if (accept('+')) {
        e += parse_term();
      } else if (accept('-')) {
        e -= parse_term();
      } else {
        return e;
      }
    }
  }

  Expression parse_term() {
    Expression e = parse_unary();
    while (true) {
      if (accept('*')) {
        e *= parse_unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expression d = parse_unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expression parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    bool paren = accept('(');
    int sign = 1;
    if (accept('-')) {
      sign = -1;
    } else {
      accept('+');
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("integer exponent expected", at);
    int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren) expect(')');
    if (sign < 0 && base.is_zero()) throw ParseError("division by zero", at);
    return base.pow(sign * n);
  }

  Expression parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      frac = std::string(text_.substr(fs, pos_ - fs));
    }
    mpz_class num(digits + frac);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return Expression(q);
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Expression parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expression e = parse_expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) throw ParseError(std::string("unexpected '") + c + "'", pos_);

    std::size_t start = pos_;
    if (allow_basis_ && text_.compare(pos_, 3, "d/d") == 0 && pos_ + 3 < text_.size() &&
        std::isalpha(static_cast<unsigned char>(text_[pos_ + 3]))) {
      pos_ += 3;
      std::size_t ns = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(ns, pos_ - ns));
      if (space_.independent_index(name) < 0 && space_.dependent_index(name) < 0) throw UndeclaredSymbolError(name, ns);
      return Expression(make_internal("d/d" + name));
    }

    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    std::vector<int> slots;
    if (!name.empty() && name.back() == '_' && pos_ < text_.size() && text_[pos_] == ';') {
      name.pop_back();
      ++pos_;
      while (true) {
        std::size_t ds = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (ds == pos_) throw ParseError("derivative slot number expected", ds);
        slots.push_back(std::stoi(std::string(text_.substr(ds, pos_ - ds))));
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '(') throw ParseError("function derivative needs an argument list", pos_);
    }

    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (!space_.is_function(name)) throw UndeclaredSymbolError(name, start);
      ++pos_;
      std::vector<Expression> args;
      if (!accept(')')) {
        do {
          args.push_back(parse_expr());
        } while (accept(','));
        expect(')');
      }
      for (int s : slots)
        if (s < 1 || s > static_cast<int>(args.size())) throw ParseError("derivative slot " + std::to_string(s) + " out of range", start);
      return apply_function(name, std::move(args), std::move(slots));
    }
    if (!slots.empty()) throw ParseError("derivative slots on a non-function", start);

    if (space_.independent_index(name) >= 0) return Expression(make_independent(name));
    if (space_.dependent_index(name) >= 0) return Expression(make_jet(name));
    if (space_.is_parameter(name)) return Expression(make_parameter(name));
    auto us = name.find('_');
    if (us != std::string::npos && space_.dependent_index(name.substr(0, us)) >= 0) {
      Atom jet;
      try {
        if (!space_.resolve_jet(name, jet)) throw UndeclaredSymbolError(name, start);
      } catch (const OrderOverflowError& e) {
        throw ParseError(std::string("derivative order exceeded: ") + e.what(), start);
      }
      return Expression(jet);
    }
    throw UndeclaredSymbolError(name, start);
  }

  std::string_view text_;
  const JetSpace& space_;
  bool allow_basis_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses DSL text into a canonical expression over `space`.
inline Expression parse(std::string_view text, const JetSpace& space) {
  return detail::ExpressionParser(text, space, false).parse_all();
}

/// Parses text that may contain basis tokens d/dX (used for vector fields).
inline Expression parse_with_basis(std::string_view text, const JetSpace& space) {
  return detail::ExpressionParser(text, space, true).parse_all();
}

}  // namespace jetsym
