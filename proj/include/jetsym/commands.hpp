#pragma once

// Command execution and reports (text and JSON).

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "jetsym/checks.hpp"
#include "jetsym/oracle.hpp"
#include "jetsym/printer.hpp"
#include "jetsym/reduction.hpp"
#include "jetsym/session.hpp"

namespace jetsym {

using Json = nlohmann::ordered_json;

struct Outcome {
  std::string title;
  bool ok = false;
  std::vector<std::string> lines;
  Json json;
};

struct RunOptions {
  OracleOptions oracle;
};

inline Json to_json(const Verdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["holds"] = v.holds;
  if (v.kind == CheckKind::QConditional || v.kind == CheckKind::Conditional || v.kind == CheckKind::Hidden) j["proper"] = v.proper;
  j["residuals"] = Json::array();
  for (const auto& r : v.residuals) j["residuals"].push_back({{"label", r.label}, {"raw", to_string(r.raw)}, {"reduced", to_string(r.reduced)}});
  j["domain_notes"] = v.domain_notes;
  j["notes"] = v.notes;
  if (v.manifold && !v.manifold->empty()) {
    Json rules = Json::array();
    for (const auto& r : v.manifold->rules()) rules.push_back({{"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}, {"source", r.source}});
    j["manifold"] = {{"rules", rules}, {"dependent_equations", v.manifold->dependent_equations()}};
  }
  if (!v.sub.empty()) {
    j["sub"] = Json::array();
    for (const auto& s : v.sub) j["sub"].push_back(to_json(s));
  }
  return j;
}

inline Json to_json(const OracleVerdict& o) {
  Json j;
  j["invariant"] = o.invariant;
  j["conclusive"] = o.conclusive;
  j["max_deviation"] = o.max_deviation;
  j["points"] = o.points;
  j["flows"] = o.flows;
  j["closed_form_flows"] = o.closed_form_flows;
  j["seed"] = o.seed;
  j["notes"] = o.notes;
  return j;
}

inline Json to_json(const PipelineReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"member", r.member},
                    {"reduction", r.reduction},
                    {"candidate", r.candidate},
                    {"transform", r.transform},
                    {"reduced", r.reduced},
                    {"lifted", r.lifted},
                    {"reduced_ok", r.reduced_ok},
                    {"reduced_holds", r.reduced_holds},
                    {"original_holds", r.original_holds},
                    {"hidden", r.hidden},
                    {"note", r.note}});
  return {{"name", rep.name}, {"rows", rows}};
}

namespace detail {

// Parse errors inside a referenced piece of text, reported at its place in the session source.
template <class F>
auto resolving(const Command& c, const std::string& ref, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DslError&) {
    throw;
  } catch (const ParseError& e) {
    std::size_t at = c.text.find(c.verb);
    while (at != std::string::npos) {
      at = c.text.find(ref, at + 1);
      if (at == std::string::npos || !(std::isalnum(static_cast<unsigned char>(c.text[at - 1])) || c.text[at - 1] == '_')) break;
    }
    if (!c.source || at == std::string::npos) throw;
    throw DslError(c.origin, *c.source, c.offset + at + e.position(), strip_offset(e.what()));
  }
}

inline std::string yes_no(bool b, const char* yes, const char* no) { return b ? yes : no; }

inline void verdict_lines(const Verdict& v, const std::string& head, std::vector<std::string>& lines) {
  std::string s = head + ": " + yes_no(v.holds, "holds", "fails");
  if (v.holds && (v.kind == CheckKind::QConditional || v.kind == CheckKind::Conditional)) s += v.proper ? " (proper)" : " (not proper: already a Lie symmetry)";
  lines.push_back(s);
  for (const auto& r : v.residuals)
    if (!r.reduced.is_zero()) lines.push_back("  residual " + r.label + ": " + to_string(r.reduced));
  for (const auto& n : v.domain_notes) lines.push_back("  domain: " + n);
  for (const auto& n : v.notes) lines.push_back("  note: " + n);
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// Symbolic verdict for one (operator, target) pair of a check command.
inline Verdict symbolic(const std::string& kind, const std::vector<VectorField>& fields, const Expression& e, const ConditionSet& cs,
                        const JetSpace& space) {
  if (kind == "lie") return check_lie_invariance(fields.front(), e, space);
  if (kind == "qcond") return check_q_conditional(fields.front(), e, space);
  if (kind == "cond") return check_conditional_invariance(fields.front(), e, cs, space);
  if (kind == "inv") return check_absolute_invariant(fields, e, space);
  return check_conditional_differential_invariant(fields, e, cs, space);
}

inline OracleVerdict numeric(const std::string& kind, const std::vector<VectorField>& fields, const Expression& e, const ConditionSet& cs,
                             const JetSpace& space, const OracleOptions& opts) {
  if (kind == "lie") return oracle_lie(fields.front(), e, space, opts);
  if (kind == "qcond") return oracle_q_conditional(fields.front(), e, space, opts);
  if (kind == "cond") return oracle_conditional(fields.front(), e, cs, space, opts);
  if (kind == "inv") return oracle_absolute_invariant(fields, e, space, opts);
  return oracle_conditional_invariant(fields, e, cs, space, opts);
}

}  // namespace detail

inline Outcome execute(Session& session, const Command& c, const RunOptions& opts = {}) {
  Outcome out;
  out.title = c.text;
  out.json["command"] = c.text;
  out.json["verb"] = c.verb;
  const JetSpace& space = session.space();

  if (c.verb == "prolong") {
    VectorField f = detail::resolving(c, c.ops.at(0), [&] { return session.op(c.ops.at(0)); });
    ProlongedField pf = prolong(f, space, c.order);
    out.ok = true;
    out.lines.push_back("prolongation of order " + std::to_string(c.order) + " of " + to_string(f, space));
    Json coefs = Json::object();
    for (const auto& [jet, eta] : pf.coefficients()) {
      out.lines.push_back("  eta[" + to_string(jet) + "] = " + to_string(eta));
      coefs[to_string(jet)] = to_string(eta);
    }
    out.json["operator"] = to_string(f, space);
    out.json["order"] = c.order;
    out.json["coefficients"] = coefs;
    return out;
  }

  if (c.verb == "check" || c.verb == "oracle") {
    std::vector<VectorField> fields;
    for (const auto& o : c.ops) fields.push_back(detail::resolving(c, o, [&] { return session.op(o); }));
    if (fields.empty()) throw Error("no operator given");
    const bool joint = c.kind == "inv" || c.kind == "cdi";
    auto targets = detail::resolving(c, c.target, [&] { return session.targets(c.target); });
    ConditionSet cs;
    for (const auto& g : c.given) {
      ConditionSet one = detail::resolving(c, g, [&] { return session.conditions({g}); });
      cs.conditions.insert(cs.conditions.end(), one.conditions.begin(), one.conditions.end());
    }
    if ((c.kind == "cond" || c.kind == "cdi") && cs.empty()) throw Error("check " + c.kind + " needs conditions ('given')");
    out.ok = true;
    out.json["kind"] = c.kind;
    out.json["results"] = Json::array();
    for (const auto& [label, e] : targets) {
      std::vector<std::vector<VectorField>> groups;
      if (joint) {
        groups.push_back(fields);
      } else {
        for (const auto& f : fields) groups.push_back({f});
      }
      for (const auto& g : groups) {
        std::vector<std::string> names;
        for (const auto& f : g) names.push_back(f.name);
        std::string head = c.kind + " [" + detail::join(names) + "] on " + label;
        Json r;
        r["operators"] = names;
        r["target"] = label;
        r["expression"] = to_string(e);
        Verdict v = detail::symbolic(c.kind, g, e, cs, space);
        r["verdict"] = to_json(v);
        if (c.verb == "check") {
          out.ok = out.ok && v.holds;
          detail::verdict_lines(v, head, out.lines);
        } else {
          OracleVerdict o = detail::numeric(c.kind, g, e, cs, space, opts.oracle);
          r["numeric"] = to_json(o);
          r["agrees"] = agrees(v, o);
          out.ok = out.ok && o.invariant && o.conclusive;
          char dev[32];
          std::snprintf(dev, sizeof dev, "%.3e", o.max_deviation);
          out.lines.push_back(head + ": numeric " + detail::yes_no(o.invariant, "invariant", "not invariant") +
                              (o.conclusive ? "" : " (inconclusive)") + ", max deviation " + dev + " over " + std::to_string(o.points) +
                              " points, symbolic " + detail::yes_no(v.holds, "holds", "fails") + ", " +
                              detail::yes_no(agrees(v, o), "agree", "DISAGREE"));
        }
        out.json["results"].push_back(r);
      }
    }
    out.json["ok"] = out.ok;
    if (c.verb == "oracle") out.json["seed"] = opts.oracle.seed;
    return out;
  }

  if (c.verb == "reduce") {
    Expression F = detail::resolving(c, c.target, [&] { return session.expression(c.target); });
    Reduction red = detail::resolving(c, c.by, [&] { return session.reduction(c.by); });
    out.json["reduction"] = red.label;
    out.json["equation"] = to_string(F);
    if (red.translation) {
      Expression r = reduce_by_translation(F, *red.translation, space);
      out.ok = true;
      out.lines.push_back("reduced by " + red.label + ": " + to_string(r) + " = 0");
      out.json["reducible"] = true;
      out.json["reduced"] = to_string(r);
      return out;
    }
    ReductionResult res = try_apply_ansatz(F, *red.ansatz, space);
    out.ok = res.reducible;
    out.json["reducible"] = res.reducible;
    out.json["substituted"] = to_string(res.substituted);
    out.json["trace"] = res.trace;
    Json residuals = Json::array();
    for (const auto& r : res.residuals) residuals.push_back({{"label", r.label}, {"residual", to_string(r.reduced)}});
    out.json["residuals"] = residuals;
    if (res.reducible) {
      out.json["reduced"] = to_string(res.reduced);
      out.lines.push_back("reduced by ansatz " + red.label + ": " + to_string(res.reduced) + " = 0");
    } else {
      out.lines.push_back("not reducible by ansatz " + red.label);
      for (const auto& r : res.residuals)
        if (!r.reduced.is_zero()) out.lines.push_back("  residual under " + r.label + ": " + to_string(r.reduced));
    }
    return out;
  }

  if (c.verb == "hidden") {
    Expression F = detail::resolving(c, c.target, [&] { return session.expression(c.target); });
    Reduction red = detail::resolving(c, c.by, [&] { return session.reduction(c.by); });
    VectorField X = detail::resolving(c, c.candidate, [&] { return session.op(c.candidate); });
    Verdict v = check_hidden_symmetry(F, red, X, space);
    out.ok = v.holds;
    detail::verdict_lines(v, "hidden " + X.name + " after reduction by " + red.label, out.lines);
    out.lines.push_back(std::string("  reduced equation invariant: ") + detail::yes_no(v.sub[0].holds, "yes", "no"));
    out.lines.push_back(std::string("  original equation invariant: ") + detail::yes_no(v.sub[1].holds, "yes", "no"));
    for (const auto& r : v.sub[1].residuals)
      if (!r.reduced.is_zero()) out.lines.push_back("  original residual: " + to_string(r.reduced));
    out.json["verdict"] = to_json(v);
    return out;
  }

  if (c.verb == "run") {
    PipelineSpec spec = session.pipeline(c.target);
    PipelineReport rep = run_pipeline(spec, space);
    out.ok = true;
    out.lines.push_back("pipeline " + spec.name + (spec.class_label.empty() ? "" : " (" + spec.class_label + ")"));
    for (const auto& r : rep.rows) {
      out.ok = out.ok && r.reduced_ok;
      std::string s = "  " + r.member + " | " + r.reduction;
      if (!r.candidate.empty())
        s += " | " + r.candidate + " | reduced " + detail::yes_no(r.reduced_holds, "invariant", "not invariant") + ", original " +
             detail::yes_no(r.original_holds, "invariant", "not invariant") + (r.hidden ? ", HIDDEN" : "");
      else if (!r.transform.empty())
        s += " | " + r.transform + " | " + r.reduced + " = 0 | lifted " + r.lifted + " = 0";
      else
        s += " | " + r.reduced + " = 0";
      if (!r.note.empty()) s += " | " + r.note;
      out.lines.push_back(s);
    }
    out.json["pipeline"] = to_json(rep);
    return out;
  }
  throw Error("unknown command '" + c.verb + "'");
}

}  // namespace jetsym
