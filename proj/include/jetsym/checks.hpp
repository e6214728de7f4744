#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "jetsym/manifold.hpp"
#include "jetsym/vector_field.hpp"

namespace jetsym {

enum class CheckKind { Lie, QConditional, Conditional, AbsoluteInvariant, ConditionalInvariant, Hidden };

inline std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Lie:
      return "lie";
    case CheckKind::QConditional:
      return "q-conditional";
    case CheckKind::Conditional:
      return "conditional";
    case CheckKind::AbsoluteInvariant:
      return "absolute-invariant";
    case CheckKind::ConditionalInvariant:
      return "conditional-invariant";
    case CheckKind::Hidden:
      return "hidden";
  }
  return "?";
}

/// One quantity that had to vanish: the raw operator image and its normal form.
struct Residual {
  std::string label;
  Expression raw;
  Expression reduced;
};

struct Verdict {
  CheckKind kind = CheckKind::Lie;
  bool holds = false;
  std::vector<Residual> residuals;
  std::shared_ptr<const ConstraintManifold> manifold;
  std::vector<std::string> domain_notes;
  std::vector<std::string> notes;
  /// Conditional kinds: the field is not already a Lie symmetry.
  bool proper = false;
  std::vector<Verdict> sub;

  /// First nonvanishing reduced residual, or zero.
  Expression residual() const {
    for (const auto& r : residuals)
      if (!r.reduced.is_zero()) return r.reduced;
    return Expression();
  }
};

namespace detail {

inline void finish(Verdict& v, const std::vector<Expression>& sources) {
  v.holds = true;
  for (const auto& r : v.residuals)
    if (!r.reduced.is_zero()) v.holds = false;
  std::set<std::string> notes;
  if (v.manifold)
    for (const auto& n : v.manifold->domain_notes()) notes.insert(n);
  for (const auto& e : sources)
    for (const auto& n : jetsym::domain_notes(e)) notes.insert(n);
  v.domain_notes.assign(notes.begin(), notes.end());
}

inline int equation_order(const Expression& e) { return std::max(1, jet_order(e)); }

}  // namespace detail

/// prX(F) reduced modulo F = 0 solved for its leading derivative. When F has
/// no rational solution for a leading derivative the residual is tested
/// without the equation and the fallback is noted.
inline Verdict check_lie_invariance(const VectorField& field, const Expression& F, const JetSpace& space) {
  Verdict v;
  v.kind = CheckKind::Lie;
  const int l = detail::equation_order(F);
  ConstraintManifold m;
  try {
    m = build_manifold(space, {}, {{F, "F"}});
  } catch (const NonlinearLeadingError&) {
    v.notes.push_back("equation not solvable for a leading derivative; residual tested identically");
  }
  v.manifold = std::make_shared<const ConstraintManifold>(m);
  Expression raw = prolong(field, space, l).apply(F);
  v.residuals.push_back(Residual{"F", raw, m.reduce(raw)});
  detail::finish(v, {F});
  return v;
}

namespace detail {

// Shared core of the two conditional kinds: manifold from conditions plus F,
// residuals for F and every generator.
inline Verdict conditional_core(CheckKind kind, const VectorField& field, const Expression& F, const ConditionSet& conditions,
                                const JetSpace& space) {
  Verdict v;
  v.kind = kind;
  int l = equation_order(F);
  for (const auto& c : conditions.conditions) l = std::max(l, jet_order(c.generator));
  ConstraintManifold m;
  try {
    m = build_manifold(space, conditions, {{F, "F"}});
  } catch (const NonlinearLeadingError&) {
    m = build_manifold(space, conditions);
    v.notes.push_back("equation not solvable for a leading derivative; residuals tested modulo the conditions only");
  }
  v.manifold = std::make_shared<const ConstraintManifold>(m);
  ProlongedField pf = prolong(field, space, l);
  Expression rf = pf.apply(F);
  v.residuals.push_back(Residual{"F", rf, m.reduce(rf)});
  std::vector<Expression> sources{F};
  for (std::size_t a = 0; a < conditions.conditions.size(); ++a) {
    const auto& c = conditions.conditions[a];
    Expression rg = pf.apply(c.generator);
    v.residuals.push_back(Residual{c.label.empty() ? "G" + std::to_string(a + 1) : c.label, rg, m.reduce(rg)});
    sources.push_back(c.generator);
  }
  finish(v, sources);
  Verdict lie = check_lie_invariance(field, F, space);
  v.proper = !lie.holds;
  v.sub.push_back(std::move(lie));
  return v;
}

}  // namespace detail

/// Invariance of {F = 0, Q[u] = 0 with consequences to order l-1} under Q.
inline Verdict check_q_conditional(const VectorField& q, const Expression& F, const JetSpace& space) {
  const int l = detail::equation_order(F);
  ConditionSet cs;
  auto chars = characteristic(q, space);
  for (std::size_t r = 0; r < chars.size(); ++r) {
    if (chars[r].is_zero()) throw Error("characteristic of " + q.name + " vanishes identically");
    cs.add(chars[r], l - 1, chars.size() == 1 ? "Q[u]" : "Q[" + space.dependents()[r] + "]");
  }
  return detail::conditional_core(CheckKind::QConditional, q, F, cs, space);
}

/// Invariance of {F = 0, G_a = 0 with consequences} under `field`.
inline Verdict check_conditional_invariance(const VectorField& field, const Expression& F, const ConditionSet& conditions,
                                            const JetSpace& space) {
  return detail::conditional_core(CheckKind::Conditional, field, F, conditions.resolved(detail::equation_order(F)), space);
}

/// prX(I) == 0 identically for every field.
inline Verdict check_absolute_invariant(const std::vector<VectorField>& fields, const Expression& I, const JetSpace& space) {
  Verdict v;
  v.kind = CheckKind::AbsoluteInvariant;
  const int k = jet_order(I);
  for (const auto& f : fields) {
    Expression raw = prolong(f, space, k).apply(I);
    v.residuals.push_back(Residual{f.name, raw, raw});
  }
  detail::finish(v, {I});
  return v;
}

/// prX(I) and prX(G_a) vanish modulo the conditions and their consequences.
/// Consequence orders default to ord(I) - ord(G_a).
inline Verdict check_conditional_differential_invariant(const std::vector<VectorField>& fields, const Expression& I,
                                                        const ConditionSet& conditions, const JetSpace& space) {
  Verdict v;
  v.kind = CheckKind::ConditionalInvariant;
  ConditionSet cs = conditions.resolved(std::max(1, jet_order(I)));
  int k = jet_order(I);
  for (const auto& c : cs.conditions) k = std::max(k, jet_order(c.generator) + c.consequence_order);
  k = std::max(k, 1);
  JetSpace wide = k > space.max_order() ? space.with_max_order(k) : space;
  auto m = std::make_shared<const ConstraintManifold>(build_manifold(wide, cs));
  v.manifold = m;
  std::vector<Expression> sources{I};
  for (const auto& f : fields) {
    ProlongedField pf = prolong(f, wide, k);
    Expression ri = pf.apply(I);
    v.residuals.push_back(Residual{f.name + ": I", ri, m->reduce(ri)});
    for (std::size_t a = 0; a < cs.conditions.size(); ++a) {
      const auto& c = cs.conditions[a];
      Expression rg = pf.apply(c.generator);
      v.residuals.push_back(Residual{f.name + ": " + (c.label.empty() ? "G" + std::to_string(a + 1) : c.label), rg, m->reduce(rg)});
    }
  }
  for (const auto& c : cs.conditions) sources.push_back(c.generator);
  detail::finish(v, sources);
  return v;
}

}  // namespace jetsym
