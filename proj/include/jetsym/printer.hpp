#pragma once

// Pretty-printer emitting the expression DSL. Output re-parses to the same
// canonical expression, so printing is a bijection on canonical forms.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "jetsym/expression.hpp"

namespace jetsym {

std::string to_string(const Expression& e);

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(Atom a) {
  const AtomNode& n = a.node();
  switch (n.kind) {
    case AtomKind::Dependent: {
      if (n.index.empty()) return n.name;
      std::string s = n.name + "_";
      for (const auto& i : n.index) s += i;
      return s;
    }
    case AtomKind::Function: {
      std::string s = n.name;
      if (!n.slots.empty()) {
        s += "_;";
        for (std::size_t i = 0; i < n.slots.size(); ++i) {
          if (i > 0) s += ",";
          s += std::to_string(n.slots[i]);
        }
      }
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i > 0) s += ", ";
        s += to_string(n.args[i]);
      }
      return s + ")";
    }
    default:
      return n.name;
  }
}

namespace detail {

// Display order: higher degree first, then the term carrying the lower-ranked
// atom first, so t^2 - x^2 - y^2 prints in declaration order.
inline bool prints_before(const Term& a, const Term& b) {
  if (a.mono.degree() != b.mono.degree()) return a.mono.degree() > b.mono.degree();
  const auto& fa = a.mono.factors();
  const auto& fb = b.mono.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first == fb[i].first) {
      if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
      continue;
    }
    return compare_atoms(fa[i].first, fb[i].first) < 0;
  }
  return i < fa.size() && i >= fb.size();
}

inline std::string monomial_string(const Monomial& m) {
  std::string s;
  for (const auto& [atom, e] : m.factors()) {
    if (!s.empty()) s += "*";
    s += to_string(atom);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

inline std::string polynomial_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<const Term*> order;
  for (const auto& t : p.terms()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) { return prints_before(*a, *b); });
  std::string s;
  bool first = true;
  for (const Term* t : order) {
    Rational mag = abs(t->coef);
    bool negative = t->coef < 0;
    if (first) {
      if (negative) s += "-";
    } else {
      s += negative ? " - " : " + ";
    }
    first = false;
    if (t->mono.is_one()) {
      s += to_string(mag);
    } else if (mag == 1) {
      s += monomial_string(t->mono);
    } else {
      s += to_string(mag) + "*" + monomial_string(t->mono);
    }
  }
  return s;
}

}  // namespace detail

inline std::string to_string(const Polynomial& p) { return detail::polynomial_string(p); }

inline std::string to_string(const Expression& e) {
  const Polynomial& num = e.numerator();
  const Polynomial& den = e.denominator();
  if (den.is_one()) return detail::polynomial_string(num);
  std::string n = detail::polynomial_string(num);
  if (num.size() > 1) n = "(" + n + ")";
  std::string d;
  if (den.is_monomial() && den.lead().coef == 1 && den.lead().mono.factors().size() == 1) {
    d = detail::monomial_string(den.lead().mono);
  } else {
    d = "(" + detail::polynomial_string(den) + ")";
  }
  return n + "/" + d;
}

inline std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << to_string(e); }
inline std::ostream& operator<<(std::ostream& os, Atom a) { return os << to_string(a); }

}  // namespace jetsym
