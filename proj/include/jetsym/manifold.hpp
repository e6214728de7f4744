#pragma once

// Condition sets, their differential consequences, and triangular rewrite
// rules for reducing expressions modulo the resulting manifold.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/jet_space.hpp"
#include "jetsym/operations.hpp"
#include "jetsym/printer.hpp"

namespace jetsym {

struct Condition {
  Expression generator;
  /// Number of total-derivative levels to add; negative means "use the default".
  int consequence_order = -1;
  std::string label;
};

struct ConditionSet {
  std::vector<Condition> conditions;

  ConditionSet& add(Expression g, int consequence_order = -1, std::string label = "") {
    if (g.is_zero()) throw Error("condition generator is identically zero");
    conditions.push_back(Condition{std::move(g), consequence_order, std::move(label)});
    return *this;
  }
  bool empty() const { return conditions.empty(); }

  /// Fills unspecified consequence orders with (equation order - condition order).
  ConditionSet resolved(int equation_order) const {
    ConditionSet out = *this;
    for (auto& c : out.conditions)
      if (c.consequence_order < 0) c.consequence_order = std::max(0, equation_order - jet_order(c.generator));
    return out;
  }
};

struct Rule {
  Atom lhs;
  Expression rhs;
  std::string source;
};

class ConstraintManifold {
 public:
  const std::vector<Rule>& rules() const { return rules_; }
  const RuleMap& rule_map() const { return map_; }
  const std::vector<std::string>& domain_notes() const { return notes_; }
  /// Source labels of equations that reduced to zero (dependent on earlier ones).
  const std::vector<std::string>& dependent_equations() const { return dependent_; }
  const ConditionSet& source() const { return source_; }
  bool empty() const { return rules_.empty(); }
  bool binds(Atom c) const { return map_.count(c) > 0; }

  Expression reduce(const Expression& e) const { return substitute_closed(e, map_); }
  bool is_zero_on(const Expression& e) const { return reduce(e).is_zero(); }

 private:
  friend class ManifoldBuilder;
  std::vector<Rule> rules_;
  RuleMap map_;
  std::vector<std::string> notes_;
  std::vector<std::string> dependent_;
  ConditionSet source_;
};

inline Expression reduce_modulo(const ConstraintManifold& m, const Expression& e) { return m.reduce(e); }
inline bool is_zero_on(const ConstraintManifold& m, const Expression& e) { return m.is_zero_on(e); }

class ManifoldBuilder {
 public:
  explicit ManifoldBuilder(const JetSpace& space) : space_(space) {}

  struct Candidate {
    Atom coord;
    Expression solution;
    std::size_t notes = 0;
  };

  /// Linear highest-order jet coordinates of `eq` with their solutions.
  std::vector<Candidate> candidates(const Expression& eq) const {
    std::vector<Candidate> out;
    AtomSet inside;  // coordinates occurring inside function arguments
    for (Atom f : functions_of(eq))
      for (const auto& arg : f.node().args)
        for (Atom c : coordinates_of(arg)) inside.insert(c);
    int top = -1;
    for (Atom c : coordinates_of(eq))
      if (c.is_dependent()) top = std::max(top, c.order());
    if (top < 0) return out;
    const Polynomial& num = eq.numerator();
    for (Atom c : eq.atoms()) {
      if (!c.is_dependent() || c.order() != top) continue;
      if (inside.count(c) || eq.denominator().contains(c)) continue;
      if (num.degree_in(c) != 1) continue;
      auto coefs = num.coefficients_in(c);
      Polynomial coef = coefs[1];
      bool clean = true;
      for (Atom a : coef.atoms())
        if (a.is_function() && depends_on(Expression(a), c)) clean = false;
      if (!clean) continue;
      Expression sol = -Expression::fraction(coefs[0], coef);
      std::size_t notes = coef.is_constant() ? 0 : jetsym::domain_notes(Expression::fraction(Polynomial(1L), coef)).size();
      out.push_back(Candidate{c, sol, notes});
    }
    return out;
  }

  /// Highest jet order among dependent coordinates, or -1 if there are none.
  static int top_order(const Expression& eq) {
    int top = -1;
    for (Atom c : coordinates_of(eq))
      if (c.is_dependent()) top = std::max(top, c.order());
    return top;
  }

  bool ranks_higher(const Candidate& a, const Candidate& b) const {
    if (a.notes != b.notes) return a.notes < b.notes;
    int ra = space_.dependent_index(a.coord.name());
    int rb = space_.dependent_index(b.coord.name());
    if (ra != rb) return ra < rb;
    return space_.multi_index(a.coord) > space_.multi_index(b.coord);
  }

  void add_equation(const Expression& raw, const std::string& label) {
    Expression eq = m_.reduce(raw);
    if (eq.is_zero()) {
      m_.dependent_.push_back(label);
      return;
    }
    if (top_order(eq) < 0) {
      if (eq.is_constant()) throw InconsistentManifoldError("equation " + label + " reduces to the nonzero constant " + to_string(eq));
      throw InconsistentManifoldError("equation " + label + " reduces to a relation without derivatives: " + to_string(eq) + " = 0");
    }
    auto cands = candidates(eq);
    if (cands.empty())
      throw NonlinearLeadingError("equation " + label + " cannot be solved rationally for a highest-order jet coordinate: " + to_string(eq));
    const Candidate* best = &cands.front();
    for (const auto& c : cands)
      if (ranks_higher(c, *best)) best = &c;
    RuleMap one{{best->coord, best->solution}};
    for (auto& r : m_.rules_) {
      r.rhs = substitute_closed(r.rhs, one);
      m_.map_[r.lhs] = r.rhs;
    }
    m_.rules_.push_back(Rule{best->coord, best->solution, label});
    m_.map_[best->coord] = best->solution;
  }

  ConstraintManifold finish() {
    std::set<std::string> notes;
    for (const auto& r : m_.rules_)
      for (auto& n : jetsym::domain_notes(r.rhs)) notes.insert(n);
    m_.notes_.assign(notes.begin(), notes.end());
    return m_;
  }

  void set_source(ConditionSet s) { m_.source_ = std::move(s); }

 private:
  const JetSpace& space_;
  ConstraintManifold m_;
};

struct LabelledEquation {
  Expression expr;
  std::string label;
};

/// All equations D_K G, |K| <= consequence order, for each condition.
inline std::vector<LabelledEquation> consequences(const JetSpace& space, const ConditionSet& conditions) {
  std::vector<LabelledEquation> out;
  for (std::size_t a = 0; a < conditions.conditions.size(); ++a) {
    const Condition& c = conditions.conditions[a];
    std::string base = c.label.empty() ? "G" + std::to_string(a + 1) : c.label;
    int k = std::max(0, c.consequence_order);
    if (jet_order(c.generator) + k > space.max_order())
      throw OrderOverflowError("consequences of " + base + " up to order " + std::to_string(k) + " exceed the maximal order " +
                               std::to_string(space.max_order()));
    for (int level = 0; level <= k; ++level) {
      for (const auto& multi : space.multi_indices(level)) {
        std::string label = base;
        if (!multi.empty()) {
          label = "D_";
          for (int i : multi) label += space.independents()[static_cast<std::size_t>(i)];
          label += "(" + base + ")";
        }
        out.push_back(LabelledEquation{total_derivative(space, c.generator, multi), label});
      }
    }
  }
  return out;
}

/// Triangularizes conditions, their consequences and any extra equations.
/// Equations are processed by increasing jet order, conditions before extras.
inline ConstraintManifold build_manifold(const JetSpace& space, const ConditionSet& conditions,
                                         const std::vector<LabelledEquation>& extra = {}) {
  std::vector<LabelledEquation> eqs = consequences(space, conditions);
  const std::size_t n_conditions = eqs.size();
  eqs.insert(eqs.end(), extra.begin(), extra.end());
  std::vector<std::size_t> order(eqs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int oa = jet_order(eqs[a].expr);
    int ob = jet_order(eqs[b].expr);
    if (oa != ob) return oa < ob;
    return (a < n_conditions) && !(b < n_conditions);
  });
  ManifoldBuilder builder(space);
  builder.set_source(conditions);
  for (std::size_t i : order) builder.add_equation(eqs[i].expr, eqs[i].label);
  return builder.finish();
}

}  // namespace jetsym
