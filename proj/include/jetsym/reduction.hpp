#pragma once

// Ansatz and translation reductions, projection of fields to reduced
// variables, hidden symmetry, affine transformations and the classification
// pipeline.

#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetsym/checks.hpp"
#include "jetsym/rank.hpp"

namespace jetsym {

/// u = phi(retained..., new variables...), new variables given in the old
/// independents. `annihilators` are fields whose geometric parts kill every
/// new variable and retained coordinate; they drive the reducibility test.
struct Ansatz {
  std::string name;
  std::string reduced_dependent = "phi";
  std::vector<std::string> retained;
  std::vector<std::pair<std::string, Expression>> variables;
  std::vector<VectorField> annihilators;
};

/// Independents: retained (declaration order) then new variables; one dependent.
inline JetSpace reduced_space(const JetSpace& space, const Ansatz& a) {
  std::vector<std::string> indep;
  for (const auto& x : space.independents())
    if (std::find(a.retained.begin(), a.retained.end(), x) != a.retained.end()) indep.push_back(x);
  for (const auto& [name, e] : a.variables) indep.push_back(name);
  JetSpace r = declare_space(indep, {a.reduced_dependent}, space.max_order());
  for (const auto& p : space.parameters()) r.add_parameter(p);
  for (const auto& f : space.functions()) r.add_function(f);
  return r;
}

/// Same space without one independent variable.
inline JetSpace without_independent(const JetSpace& space, const std::string& var) {
  std::vector<std::string> indep;
  std::vector<int> metric;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (space.independents()[i] == var) continue;
    indep.push_back(space.independents()[i]);
    if (space.has_metric()) metric.push_back(space.declared_metric()[i]);
  }
  if (indep.size() == space.dimension()) throw Error("'" + var + "' is not an independent variable");
  JetSpace r = declare_space(indep, space.dependents(), space.max_order(), metric);
  for (const auto& p : space.parameters()) r.add_parameter(p);
  for (const auto& f : space.functions()) r.add_function(f);
  return r;
}

inline std::vector<std::string> eliminated_variables(const JetSpace& space, const Ansatz& a) {
  std::vector<std::string> out;
  for (const auto& x : space.independents())
    if (std::find(a.retained.begin(), a.retained.end(), x) == a.retained.end()) out.push_back(x);
  return out;
}

/// Functional independence of the new variables and retained coordinates
/// (Jacobian rank at a fixed generic point).
inline bool ansatz_variables_independent(const JetSpace& space, const Ansatz& a) {
  std::vector<Expression> exprs;
  for (const auto& w : a.retained) exprs.push_back(Expression(space.independent(w)));
  for (const auto& [n, e] : a.variables) exprs.push_back(e);
  std::vector<Atom> coords;
  PointMap p;
  const double probe[] = {0.7, -1.3, 1.9, -0.4, 1.1};
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    coords.push_back(space.independent(i));
    p[coords.back()] = probe[i % 5] + 0.1 * static_cast<double>(i / 5);
  }
  return jacobian_rank(exprs, coords, p) == static_cast<int>(exprs.size());
}

namespace detail {

// Total derivatives of expressions in old independents and phi-jets, phi being
// a function of the reduced variables.
class ChainRule {
 public:
  ChainRule(const JetSpace& space, const Ansatz& a) : space_(space), a_(a), rspace_(reduced_space(space, a)) {
    const std::size_t nb = rspace_.dimension();
    dw_.assign(nb, std::vector<Expression>(space.dimension()));
    for (std::size_t b = 0; b < nb; ++b) {
      Expression w = reduced_variable(b);
      for (std::size_t i = 0; i < space.dimension(); ++i) dw_[b][i] = diff(w, space.independent(i));
    }
  }

  const JetSpace& reduced() const { return rspace_; }

  /// Reduced independent b as an expression in the old independents.
  Expression reduced_variable(std::size_t b) const {
    const std::string& n = rspace_.independents()[b];
    for (const auto& [name, e] : a_.variables)
      if (name == n) return e;
    return Expression(space_.independent(n));
  }

  const Expression& dw(std::size_t b, std::size_t i) const { return dw_[b][i]; }

  Expression D(const Expression& e, std::size_t i) const {
    Expression out = diff(e, space_.independent(i));
    for (Atom c : coordinates_of(e)) {
      if (!c.is_dependent() || c.name() != a_.reduced_dependent) continue;
      Expression de = diff(e, c);
      if (de.is_zero()) continue;
      for (std::size_t b = 0; b < rspace_.dimension(); ++b) {
        if (dw_[b][i].is_zero()) continue;
        out += de * Expression(rspace_.raise(c, b)) * dw_[b][i];
      }
    }
    return out;
  }

  /// u_J in terms of phi-jets and old independents.
  Expression image(Atom ujet) {
    auto it = cache_.find(ujet.get());
    if (it != cache_.end()) return it->second;
    std::vector<int> multi = space_.multi_index(ujet);
    Expression out;
    if (multi.empty()) {
      out = Expression(rspace_.dependent(0));
    } else {
      std::vector<int> parent(multi.begin(), multi.end() - 1);
      out = D(image(space_.jet(0, parent)), static_cast<std::size_t>(multi.back()));
    }
    cache_.emplace(ujet.get(), out);
    return out;
  }

 private:
  const JetSpace& space_;
  const Ansatz& a_;
  JetSpace rspace_;
  std::vector<std::vector<Expression>> dw_;
  std::unordered_map<const AtomNode*, Expression> cache_;
};

/// s^(m k) -> v^k throughout e (function arguments included).
inline Expression replace_powers(const Expression& e, Atom s, unsigned m, const Expression& v) {
  auto poly = [&](const Polynomial& p) {
    Expression out;
    for (const Term& t : p.terms()) {
      Expression acc(t.coef);
      for (const auto& [atom, k] : t.mono.factors()) {
        if (atom == s) {
          if (k % m != 0)
            throw SingularSectionError("section variable appears with power " + std::to_string(k) + ", not a multiple of " + std::to_string(m));
          acc *= v.pow(static_cast<int>(k / m));
        } else if (atom.is_function() && depends_on(Expression(atom), s)) {
          std::vector<Expression> args;
          for (const auto& arg : atom.node().args) args.push_back(replace_powers(arg, s, m, v));
          acc *= apply_function(atom.name(), std::move(args), atom.node().slots).pow(static_cast<int>(k));
        } else {
          acc *= Expression(Polynomial::from_term(Monomial(atom, k), Rational(1)));
        }
      }
      out += acc;
    }
    return out;
  };
  return poly(e.numerator()) / poly(e.denominator());
}

}  // namespace detail

/// Restricts an expression in old independents (plus other symbols) to the
/// section: first eliminated variable = s, remaining eliminated = 0, then
/// rewrites powers of s through the single new variable z = c s^m.
inline Expression pin_section(const Expression& e, const JetSpace& space, const Ansatz& a) {
  if (a.variables.size() != 1) throw SingularSectionError("section pinning needs exactly one new variable");
  auto elim = eliminated_variables(space, a);
  if (elim.empty()) throw SingularSectionError("ansatz eliminates no variable");
  Atom s = make_internal("s");
  Rules section;
  section.emplace_back(space.independent(elim[0]), Expression(s));
  for (std::size_t i = 1; i < elim.size(); ++i) section.emplace_back(space.independent(elim[i]), Expression());
  RuleMap rm(section.begin(), section.end());
  Expression z = substitute_closed(a.variables[0].second, rm);
  if (!z.is_polynomial() || !z.numerator().is_monomial() || z.numerator().atoms() != std::vector<Atom>{s})
    throw SingularSectionError("new variable restricted to the section is not a monomial c*s^m: " + to_string(z));
  const Term& lead = z.numerator().lead();
  const unsigned m = lead.mono.degree();
  Expression value = Expression(make_independent(a.variables[0].first)) / Expression(lead.coef);
  Expression pinned;
  try {
    pinned = substitute_closed(e, rm);
  } catch (const DomainError& err) {
    throw SingularSectionError(std::string("expression singular on the section: ") + err.what());
  }
  return detail::replace_powers(pinned, s, m, value);
}

struct ReductionResult {
  bool reducible = false;
  /// Chain-rule image of F in old independents and phi-jets.
  Expression substituted;
  /// Annihilator images of `substituted`; all zero iff reducible.
  std::vector<Residual> residuals;
  /// Reduced equation (valid when reducible).
  Expression reduced;
  std::vector<std::string> trace;
};

inline ReductionResult try_apply_ansatz(const Expression& F, const Ansatz& a, const JetSpace& space) {
  if (space.dependents().size() != 1) throw Error("ansatz reduction supports one dependent variable");
  ReductionResult res;
  detail::ChainRule chain(space, a);
  Rules rules;
  for (Atom c : coordinates_of(F)) {
    if (!c.is_dependent()) continue;
    Expression img = chain.image(c);
    rules.emplace_back(c, img);
    res.trace.push_back(to_string(c) + " -> " + to_string(img));
  }
  res.substituted = substitute_closed(F, RuleMap(rules.begin(), rules.end()));
  res.reducible = true;
  for (const auto& X : a.annihilators) {
    Expression r;
    for (std::size_t i = 0; i < space.dimension(); ++i)
      if (!X.xi[i].is_zero()) r += X.xi[i] * diff(res.substituted, space.independent(i));
    res.residuals.push_back(Residual{X.name, r, r});
    if (!r.is_zero()) res.reducible = false;
  }
  if (!res.reducible) return res;
  res.reduced = pin_section(res.substituted, space, a);
  const JetSpace& rs = chain.reduced();
  for (Atom c : coordinates_of(res.reduced)) {
    if (!rs.owns(c)) {
      res.reducible = false;
      res.residuals.push_back(Residual{"section", Expression(c), Expression(c)});
    }
  }
  return res;
}

inline Expression apply_ansatz(const Expression& F, const Ansatz& a, const JetSpace& space) {
  ReductionResult r = try_apply_ansatz(F, a, space);
  if (!r.reducible) {
    std::string msg = "equation is not reducible by ansatz " + a.name;
    for (const auto& res : r.residuals)
      if (!res.reduced.is_zero()) msg += "; residual under " + res.label + ": " + to_string(res.reduced);
    throw NotReducibleError(msg);
  }
  return r.reduced;
}

/// Inverse of the chain-rule map on the conditional manifold: phi-jets are
/// rewritten through u-jets, new variables through their definitions.
inline Expression lift_back(const Expression& reduced, const Ansatz& a, const JetSpace& space) {
  if (a.variables.size() != 1) throw Error("lift-back needs exactly one new variable");
  JetSpace rs = reduced_space(space, a);
  const Expression& z = a.variables[0].second;
  auto elim = eliminated_variables(space, a);
  int v = -1;
  for (const auto& name : elim)
    if (!diff(z, space.independent(name)).is_zero()) {
      v = space.independent_index(name);
      break;
    }
  if (v < 0) throw Error("new variable does not depend on any eliminated variable");
  const Expression zv = diff(z, space.independent(static_cast<std::size_t>(v)));
  const std::size_t zb = rs.dimension() - 1;
  std::map<std::vector<int>, Expression> memo;
  std::function<Expression(const std::vector<int>&)> image = [&](const std::vector<int>& multi) -> Expression {
    auto it = memo.find(multi);
    if (it != memo.end()) return it->second;
    Expression out;
    if (multi.empty()) {
      out = Expression(space.dependent(0));
    } else {
      std::vector<int> parent(multi.begin(), multi.end() - 1);
      std::size_t b = static_cast<std::size_t>(multi.back());
      Expression base = image(parent);
      if (b == zb) {
        out = total_derivative(space, base, static_cast<std::size_t>(v)) / zv;
      } else {
        std::size_t w = static_cast<std::size_t>(space.independent_index(rs.independents()[b]));
        std::vector<int> up = parent;
        up.push_back(static_cast<int>(zb));
        std::sort(up.begin(), up.end());
        out = total_derivative(space, base, w) - image(up) * diff(z, space.independent(w));
      }
    }
    memo.emplace(multi, out);
    return out;
  };
  Rules rules;
  for (Atom c : coordinates_of(reduced)) {
    if (c.is_dependent() && c.name() == a.reduced_dependent) rules.emplace_back(c, image(rs.multi_index(c)));
  }
  rules.emplace_back(make_independent(a.variables[0].first), z);
  return substitute_closed(reduced, RuleMap(rules.begin(), rules.end()));
}

// ---------------------------------------------------------------------------
// Translation reduction

/// Drops every jet differentiated in `direction`; F must not depend on it explicitly.
inline Expression reduce_by_translation(const Expression& F, const std::string& direction, const JetSpace& space) {
  Atom x = space.independent(direction);
  if (!diff(F, x).is_zero()) throw NotReducibleError("equation depends explicitly on " + direction + ": dF/d" + direction + " = " + to_string(diff(F, x)));
  Rules zero;
  for (Atom c : coordinates_of(F)) {
    if (!c.is_dependent()) continue;
    const auto& idx = c.node().index;
    if (std::find(idx.begin(), idx.end(), direction) != idx.end()) zero.emplace_back(c, Expression());
  }
  return substitute_closed(F, RuleMap(zero.begin(), zero.end()));
}

/// Either a translation along one independent or an ansatz.
struct Reduction {
  std::string label;
  std::optional<std::string> translation;
  std::optional<Ansatz> ansatz;

  static Reduction by_translation(const std::string& var) { return Reduction{"d/d" + var, var, std::nullopt}; }
  static Reduction by_ansatz(const Ansatz& a) { return Reduction{a.name, std::nullopt, a}; }
};

inline JetSpace reduced_space(const JetSpace& space, const Reduction& r) {
  return r.translation ? without_independent(space, *r.translation) : reduced_space(space, *r.ansatz);
}

inline Expression reduce(const Expression& F, const Reduction& r, const JetSpace& space) {
  return r.translation ? reduce_by_translation(F, *r.translation, space) : apply_ansatz(F, *r.ansatz, space);
}

/// Push-forward of X to the reduced variables. Components along eliminated
/// directions are dropped; every kept component must be expressible in the
/// reduced variables.
inline VectorField project(const VectorField& X, const Reduction& red, const JetSpace& space) {
  JetSpace rs = reduced_space(space, red);
  VectorField out;
  out.name = X.name + "|" + red.label;
  if (red.translation) {
    Atom x = space.independent(*red.translation);
    auto check = [&](const Expression& c) {
      if (depends_on(c, x)) throw ProjectionUndefinedError("component " + to_string(c) + " depends on the eliminated variable " + *red.translation);
      return c;
    };
    for (std::size_t i = 0; i < space.dimension(); ++i)
      if (space.independents()[i] != *red.translation) out.xi.push_back(check(X.xi[i]));
    for (const auto& e : X.eta) out.eta.push_back(check(e));
    return out;
  }
  const Ansatz& a = *red.ansatz;
  detail::ChainRule chain(space, a);
  RuleMap to_phi{{space.dependent(0), Expression(rs.dependent(0))}};
  auto express = [&](const Expression& c) {
    Expression e = substitute_closed(c, to_phi);
    for (const auto& A : a.annihilators) {
      Expression r;
      for (std::size_t i = 0; i < space.dimension(); ++i)
        if (!A.xi[i].is_zero()) r += A.xi[i] * diff(e, space.independent(i));
      if (!r.is_zero()) throw ProjectionUndefinedError("component " + to_string(c) + " is not a function of the reduced variables");
    }
    return pin_section(e, space, a);
  };
  for (std::size_t b = 0; b < rs.dimension(); ++b) {
    Expression c;
    for (std::size_t i = 0; i < space.dimension(); ++i) c += X.xi[i] * chain.dw(b, i);
    out.xi.push_back(express(c));
  }
  out.eta.push_back(express(X.eta[0]));
  return out;
}

/// X is a hidden symmetry: its projection is a Lie symmetry of the reduced
/// equation while X itself is not a Lie symmetry of F.
inline Verdict check_hidden_symmetry(const Expression& F, const Reduction& red, const VectorField& X, const JetSpace& space) {
  Verdict v;
  v.kind = CheckKind::Hidden;
  JetSpace rs = reduced_space(space, red);
  Expression reduced = reduce(F, red, space);
  VectorField X1 = project(X, red, space);
  Verdict reduced_lie = check_lie_invariance(X1, reduced, rs);
  Verdict original_lie = check_lie_invariance(X, F, space);
  v.residuals = reduced_lie.residuals;
  v.residuals[0].label = "reduced";
  v.manifold = reduced_lie.manifold;
  v.domain_notes = reduced_lie.domain_notes;
  v.holds = reduced_lie.holds && !original_lie.holds;
  v.proper = !original_lie.holds;
  if (original_lie.holds) v.notes.push_back("the operator is already a Lie symmetry of the original equation");
  if (!reduced_lie.holds) v.notes.push_back("the projected operator is not a Lie symmetry of the reduced equation");
  v.notes.push_back("reduced equation: " + to_string(reduced));
  v.sub.push_back(std::move(reduced_lie));
  v.sub.push_back(std::move(original_lie));
  return v;
}

// ---------------------------------------------------------------------------
// Affine point transformations

/// x~ = A x + c on the listed variables (identity elsewhere), u~ = alpha u + beta.
struct AffineTransform {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> shift;
  Rational alpha = 1;
  Rational beta = 0;
};

namespace detail {

inline std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw NonInvertibleTransformError("transformation matrix is singular");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace detail

/// Rewrites E(x, u, u_J) = 0 in the transformed variables (named as before).
inline Expression transform_equation(const Expression& E, const AffineTransform& T, const JetSpace& space) {
  const std::size_t n = space.dimension();
  if (T.alpha == 0) throw NonInvertibleTransformError("dependent-variable scale is zero");
  if (T.A.size() != T.vars.size()) throw Error("transformation matrix size differs from its variable list");
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) M[i][i] = 1;
  std::vector<std::size_t> pos;
  for (const auto& v : T.vars) {
    int p = space.independent_index(v);
    if (p < 0) throw Error("transformation variable '" + v + "' is not an independent variable");
    pos.push_back(static_cast<std::size_t>(p));
  }
  for (std::size_t a = 0; a < pos.size(); ++a) {
    if (T.A[a].size() != pos.size()) throw Error("transformation matrix is not square");
    for (std::size_t b = 0; b < pos.size(); ++b) M[pos[a]][pos[b]] = T.A[a][b];
    if (a < T.shift.size()) c[pos[a]] = T.shift[a];
  }
  auto Minv = detail::invert(M);
  Rules rules;
  for (std::size_t i = 0; i < n; ++i) {
    Expression xi;
    for (std::size_t j = 0; j < n; ++j)
      if (Minv[i][j] != 0) xi += Expression(Minv[i][j]) * (Expression(space.independent(j)) - Expression(c[j]));
    rules.emplace_back(space.independent(i), xi);
  }
  const Expression inv_alpha(Rational(1) / T.alpha);
  for (Atom a : coordinates_of(E)) {
    if (!a.is_dependent()) continue;
    std::size_t r = static_cast<std::size_t>(space.dependent_index(a.name()));
    std::vector<int> multi = space.multi_index(a);
    if (multi.empty()) {
      rules.emplace_back(a, (Expression(a) - Expression(T.beta)) * inv_alpha);
      continue;
    }
    // u_{i1..ik} = (1/alpha) sum_{j} M_{j1 i1} ... M_{jk ik} u~_{j1..jk}
    Expression img;
    std::vector<int> js(multi.size(), 0);
    while (true) {
      Rational w = 1;
      for (std::size_t m = 0; m < multi.size() && w != 0; ++m) w *= M[static_cast<std::size_t>(js[m])][static_cast<std::size_t>(multi[m])];
      if (w != 0) img += Expression(w) * Expression(space.jet(r, js));
      std::size_t k = 0;
      while (k < js.size() && ++js[k] == static_cast<int>(n)) js[k++] = 0;
      if (k == js.size()) break;
    }
    rules.emplace_back(a, img * inv_alpha);
  }
  return substitute_closed(E, RuleMap(rules.begin(), rules.end()));
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineSpec {
  std::string name;
  std::string class_label;
  std::vector<std::pair<std::string, Expression>> members;
  std::vector<Reduction> reductions;
  std::vector<VectorField> candidates;
  std::vector<AffineTransform> transforms;
};

struct PipelineRow {
  std::string member;
  std::string reduction;
  std::string candidate;   // empty for transform rows and reduction-only rows
  std::string transform;   // empty unless a transform row
  std::string reduced;     // reduced (or transformed reduced) equation, or the error
  std::string lifted;      // transform rows: the lifted-back equation
  bool reduced_ok = false;
  bool reduced_holds = false;
  bool original_holds = false;
  bool hidden = false;
  std::string note;
};

struct PipelineReport {
  std::string name;
  std::vector<PipelineRow> rows;
};

namespace detail {

inline std::vector<PipelineRow> pipeline_member(const PipelineSpec& spec, const std::string& member, const Expression& F,
                                                const JetSpace& space) {
  std::vector<PipelineRow> rows;
  for (const auto& red : spec.reductions) {
    PipelineRow base;
    base.member = member;
    base.reduction = red.label;
    Expression reduced;
    JetSpace rs;
    try {
      rs = reduced_space(space, red);
      reduced = reduce(F, red, space);
      base.reduced = to_string(reduced);
      base.reduced_ok = true;
    } catch (const Error& e) {
      base.reduced = e.what();
      base.note = "reduction failed";
      rows.push_back(base);
      continue;
    }
    if (spec.candidates.empty()) rows.push_back(base);
    for (const auto& X : spec.candidates) {
      PipelineRow row = base;
      row.candidate = X.name;
      try {
        VectorField X1 = project(X, red, space);
        row.reduced_holds = check_lie_invariance(X1, reduced, rs).holds;
        row.original_holds = check_lie_invariance(X, F, space).holds;
        row.hidden = row.reduced_holds && !row.original_holds;
        row.note = row.hidden ? "hidden symmetry; inequivalence left to user judgment" : "";
      } catch (const Error& e) {
        row.note = e.what();
      }
      rows.push_back(row);
    }
    for (const auto& T : spec.transforms) {
      PipelineRow row = base;
      row.transform = T.name;
      try {
        Expression tr = transform_equation(reduced, T, rs);
        row.reduced = to_string(tr);
        Expression lifted = red.translation ? transform_equation(F, T, space) : lift_back(tr, *red.ansatz, space);
        row.lifted = to_string(lifted);
        if (red.translation && !(reduce_by_translation(lifted, *red.translation, space) == tr))
          row.note = "lifted equation does not reduce back to the transformed reduced equation";
        else
          row.note = "lifted back";
      } catch (const Error& e) {
        row.reduced_ok = false;
        row.note = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace detail

/// Runs every member through every reduction, candidate and transformation.
/// Members are evaluated concurrently; rows keep input order.
inline PipelineReport run_pipeline(const PipelineSpec& spec, const JetSpace& space) {
  for (const auto& T : spec.transforms) {
    if (T.alpha == 0) throw NonInvertibleTransformError("transformation " + T.name + " scales u by zero");
    detail::invert(T.A);
  }
  std::vector<std::future<std::vector<PipelineRow>>> jobs;
  for (const auto& [name, F] : spec.members)
    jobs.push_back(std::async(std::launch::async, [&spec, &space, name = name, F = F] { return detail::pipeline_member(spec, name, F, space); }));
  PipelineReport report;
  report.name = spec.name;
  for (auto& j : jobs) {
    auto rows = j.get();
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

}  // namespace jetsym
