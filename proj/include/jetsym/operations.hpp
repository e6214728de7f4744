#pragma once

// Differentiation, substitution, symbol collection and numeric evaluation of
// canonical expressions.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jetsym/expression.hpp"
#include "jetsym/printer.hpp"

namespace jetsym {

using AtomSet = std::set<Atom, AtomLess>;

namespace detail {

inline void collect(const Expression& e, AtomSet& coords, AtomSet* functions) {
  for (Atom a : e.atoms()) {
    if (a.is_function()) {
      if (functions) functions->insert(a);
      for (const auto& arg : a.node().args) collect(arg, coords, functions);
    } else {
      coords.insert(a);
    }
  }
}

}  // namespace detail

/// Every non-function atom of `e`, including those inside function arguments.
inline AtomSet coordinates_of(const Expression& e) {
  AtomSet out;
  detail::collect(e, out, nullptr);
  return out;
}

/// Every applied-function atom of `e`, including nested ones.
inline AtomSet functions_of(const Expression& e) {
  AtomSet coords;
  AtomSet fns;
  detail::collect(e, coords, &fns);
  return fns;
}

inline bool depends_on(const Expression& e, Atom c) { return coordinates_of(e).count(c) > 0; }

/// Highest jet order among the dependent coordinates of `e` (0 if none).
inline int jet_order(const Expression& e) {
  int k = 0;
  for (Atom a : coordinates_of(e))
    if (a.is_dependent()) k = std::max(k, a.order());
  return k;
}

// ---------------------------------------------------------------------------
// Differentiation

Expression diff(const Expression& e, Atom c);

namespace detail {

inline Expression diff_atom(Atom a, Atom c) {
  if (a == c) return Expression(1L);
  if (!a.is_function()) return Expression();
  const AtomNode& n = a.node();
  Expression out;
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    Expression da = diff(n.args[i], c);
    if (da.is_zero()) continue;
    std::vector<int> slots = n.slots;
    slots.push_back(static_cast<int>(i) + 1);
    out += apply_function(n.name, n.args, std::move(slots)) * da;
  }
  return out;
}

inline Expression diff_polynomial(const Polynomial& p, Atom c) {
  Expression out;
  for (Atom a : p.atoms()) {
    Expression da = diff_atom(a, c);
    if (da.is_zero()) continue;
    out += Expression(p.derivative(a)) * da;
  }
  return out;
}

}  // namespace detail

/// Partial derivative treating every coordinate as an independent symbol;
/// applied functions differentiate by the chain rule through their arguments.
inline Expression diff(const Expression& e, Atom c) {
  Expression dn = detail::diff_polynomial(e.numerator(), c);
  if (e.is_polynomial()) return dn;
  Expression dd = detail::diff_polynomial(e.denominator(), c);
  if (dd.is_zero()) return dn * Expression::fraction(Polynomial(1L), e.denominator());
  Expression den(e.denominator());
  return (dn * den - Expression(e.numerator()) * dd) / (den * den);
}

// ---------------------------------------------------------------------------
// Substitution

using Rules = std::vector<std::pair<Atom, Expression>>;

namespace detail {

class Substituter {
 public:
  explicit Substituter(const std::map<Atom, Expression, AtomLess>& rules) : rules_(rules) {}

  Expression apply(const Expression& e) {
    bool changed = false;
    for (Atom a : e.atoms())
      if (image(a)) changed = true;
    if (!changed) return e;
    auto [pn, pd] = apply(e.numerator());
    if (e.is_polynomial()) return Expression::fraction(pn, pd);
    auto [qn, qd] = apply(e.denominator());
    if (qn.is_zero()) throw DomainError("denominator " + to_string(Expression(e.denominator())) + " vanishes under substitution");
    return Expression::fraction(pn * qd, pd * qn);
  }

 private:
  const std::optional<Expression>& image(Atom a) {
    auto it = cache_.find(a.get());
    if (it != cache_.end()) return it->second;
    std::optional<Expression> img;
    auto r = rules_.find(a);
    if (r != rules_.end()) {
      img = r->second;
    } else if (a.is_function()) {
      const AtomNode& n = a.node();
      std::vector<Expression> args;
      bool changed = false;
      for (const auto& arg : n.args) {
        args.push_back(apply(arg));
        if (!(args.back() == arg)) changed = true;
      }
      if (changed) img = apply_function(n.name, std::move(args), n.slots);
    }
    return cache_.emplace(a.get(), std::move(img)).first->second;
  }

  std::pair<Polynomial, Polynomial> apply(const Polynomial& p) {
    struct Powers {
      std::vector<Polynomial> num;
      std::vector<Polynomial> den;
      unsigned max_exp = 0;
    };
    std::map<Atom, Powers, AtomLess> changed;
    for (Atom a : p.atoms()) {
      const auto& img = image(a);
      if (!img) continue;
      Powers pw;
      pw.max_exp = p.degree_in(a);
      pw.num.push_back(Polynomial(1L));
      pw.den.push_back(Polynomial(1L));
      for (unsigned k = 1; k <= pw.max_exp; ++k) {
        pw.num.push_back(pw.num.back() * img->numerator());
        pw.den.push_back(pw.den.back() * img->denominator());
      }
      changed.emplace(a, std::move(pw));
    }
    Polynomial den(1L);
    for (auto& [a, pw] : changed) den = den * pw.den[pw.max_exp];
    std::vector<Term> kept;
    Polynomial num;
    for (const Term& t : p.terms()) {
      Monomial rest;
      Polynomial factor(t.coef);
      for (const auto& [atom, e] : t.mono.factors())
        if (!changed.count(atom)) rest = rest * Monomial(atom, e);
      for (const auto& [atom, pw] : changed) {
        unsigned e = t.mono.exponent(atom);
        if (e > 0) factor = factor * pw.num[e];
        if (pw.max_exp > e) factor = factor * pw.den[pw.max_exp - e];
      }
      num = num + factor.times(rest, Rational(1));
    }
    return {num, den};
  }

  const std::map<Atom, Expression, AtomLess>& rules_;
  std::unordered_map<const AtomNode*, std::optional<Expression>> cache_;
};

}  // namespace detail

/// Simultaneous substitution followed by renormalization. Rules whose right
/// sides mention other left sides are first closed in dependency order;
/// genuinely cyclic rule sets raise CyclicRulesError.
inline Expression substitute(const Expression& e, const Rules& rules) {
  if (rules.empty()) return e;
  std::map<Atom, Expression, AtomLess> map;
  for (const auto& [a, rhs] : rules) map[a] = rhs;

  // Close the rule set: repeatedly substitute into right-hand sides until no
  // right side mentions a left side. At most |rules| rounds for an acyclic set.
  for (std::size_t round = 0;; ++round) {
    bool dirty = false;
    for (const auto& [a, rhs] : map) {
      AtomSet c = coordinates_of(rhs);
      for (const auto& [b, unused] : map) {
        if (c.count(b)) {
          dirty = true;
          break;
        }
      }
      if (dirty) break;
    }
    if (!dirty) break;
    if (round >= map.size()) throw CyclicRulesError("substitution rules are cyclic");
    std::map<Atom, Expression, AtomLess> next;
    detail::Substituter sub(map);
    for (const auto& [a, rhs] : map) next[a] = sub.apply(rhs);
    map = std::move(next);
  }
  detail::Substituter sub(map);
  return sub.apply(e);
}

inline Expression substitute(const Expression& e, Atom a, const Expression& value) { return substitute(e, Rules{{a, value}}); }

using RuleMap = std::map<Atom, Expression, AtomLess>;

/// Substitution with a rule set already known to be triangular (no right side
/// mentions a left side); skips the closure pass.
inline Expression substitute_closed(const Expression& e, const RuleMap& rules) {
  if (rules.empty()) return e;
  detail::Substituter sub(rules);
  return sub.apply(e);
}

// ---------------------------------------------------------------------------
// Numeric evaluation

/// Numeric model of an opaque function: value of the derivative with the given
/// (sorted, 1-based) slot multi-index at the given argument values.
using FunctionModel = std::function<double(const std::vector<int>& slots, const std::vector<double>& args)>;
using FunctionTable = std::map<std::string, FunctionModel>;
using PointMap = std::map<Atom, double, AtomLess>;

class NumericEvaluator {
 public:
  NumericEvaluator(const PointMap& point, const FunctionTable& functions) : functions_(functions) {
    for (const auto& [a, v] : point) values_[a.get()] = v;
  }

  void set(Atom a, double v) { values_[a.get()] = v; }

  double operator()(const Expression& e) {
    double d = eval(e.denominator());
    if (d == 0.0) throw DomainError("denominator vanishes at evaluation point: " + to_string(Expression(e.denominator())));
    return eval(e.numerator()) / d;
  }

  /// Sum of |term| over the numerator divided by |denominator|: the scale
  /// against which cancellation error in operator() is measured.
  double magnitude(const Expression& e) {
    double d = std::abs(eval(e.denominator()));
    if (d == 0.0) throw DomainError("denominator vanishes at evaluation point: " + to_string(Expression(e.denominator())));
    double sum = 0.0;
    for (const Term& t : e.numerator().terms()) {
      double v = std::abs(t.coef.get_d());
      for (const auto& [atom, k] : t.mono.factors()) v *= std::pow(std::abs(atom_value(atom)), static_cast<double>(k));
      sum += v;
    }
    return sum / d;
  }

 private:
  double atom_value(Atom a) {
    if (!a.is_function()) {
      auto it = values_.find(a.get());
      if (it == values_.end()) throw UnboundSymbolError("no value bound for '" + to_string(a) + "'");
      return it->second;
    }
    auto cached = function_cache_.find(a.get());
    if (cached != function_cache_.end()) return cached->second;
    const AtomNode& n = a.node();
    auto f = functions_.find(n.name);
    if (f == functions_.end()) throw UnboundSymbolError("no model bound for function '" + n.name + "'");
    std::vector<double> args;
    args.reserve(n.args.size());
    for (const auto& arg : n.args) args.push_back((*this)(arg));
    double v = f->second(n.slots, args);
    function_cache_[a.get()] = v;
    return v;
  }

  double eval(const Polynomial& p) {
    double sum = 0.0;
    for (const Term& t : p.terms()) {
      double v = t.coef.get_d();
      for (const auto& [atom, e] : t.mono.factors()) {
        double x = atom_value(atom);
        double xe = x;
        for (unsigned k = 1; k < e; ++k) xe *= x;
        v *= xe;
      }
      sum += v;
    }
    return sum;
  }

  std::unordered_map<const AtomNode*, double> values_;
  std::unordered_map<const AtomNode*, double> function_cache_;
  const FunctionTable& functions_;
};

/// IEEE double evaluation of the canonical form.
inline double eval_numeric(const Expression& e, const PointMap& point, const FunctionTable& functions = {}) {
  NumericEvaluator ev(point, functions);
  return ev(e);
}

// ---------------------------------------------------------------------------
// Domain restrictions

/// Factors that must not vanish for `e` to be defined: single atoms of the
/// denominator's monomial content, the remaining non-monomial cofactor, and
/// the same recursively for function arguments. Printed as "expr != 0".
inline std::vector<std::string> domain_notes(const Expression& e) {
  std::set<std::string> notes;
  std::function<void(const Expression&)> walk = [&](const Expression& x) {
    const Polynomial& d = x.denominator();
    if (!d.is_constant()) {
      Monomial m = d.monomial_content();
      for (const auto& [atom, k] : m.factors()) notes.insert(to_string(atom) + " != 0");
      Polynomial rest = m.is_one() ? d : d.divided_by(m);
      if (!rest.is_constant()) notes.insert("(" + to_string(rest) + ") != 0");
    }
    for (Atom a : x.atoms())
      if (a.is_function())
        for (const auto& arg : a.node().args) walk(arg);
  };
  walk(e);
  return {notes.begin(), notes.end()};
}

}  // namespace jetsym
