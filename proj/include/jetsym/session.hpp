#pragma once

// Session files: a space header, named declarations and a command list.
//
//   space t, x, y -> u order 2 metric 1, -1, -1;
//   param lambda0;  func K1, K2;
//   op J = x*d/dy - y*d/dx;
//   cond rot: x*u_y - y*u_x = 0 upto 1;
//   conds lorentz = c1, c2, c3;
//   expr F = u_tt - u_xx - u_yy;
//   invariants DI = u_x^2 + u_y^2, contract x_a*u_a;
//   ansatz r: u = phi(t, r) where r = x^2 + y^2 by J;
//   reduction ry = translation y;
//   transform boost: t -> 5/4*t + 3/4*x, x -> 3/4*t + 5/4*x, u -> u;
//   pipeline wave class "box u = f" members F reductions ry candidates J transforms boost;
//
//   prolong J order 2;
//   check lie|qcond|cond|inv|cdi J, J01 on F given rot;
//   oracle <same as check>;
//   reduce F by r;
//   hidden F by ry candidate d/dy;
//   run wave;

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetsym/checks.hpp"
#include "jetsym/error.hpp"
#include "jetsym/jet_space.hpp"
#include "jetsym/manifold.hpp"
#include "jetsym/parser.hpp"
#include "jetsym/reduction.hpp"
#include "jetsym/vector_field.hpp"

namespace jetsym {

/// DSL error located in the session source.
class DslError : public ParseError {
 public:
  DslError(const std::string& origin, std::string_view source, std::size_t offset, const std::string& message)
      : ParseError(Located{}, locate(origin, source, offset) + ": " + message + " near '" + snippet(source, offset) + "'", offset) {}

 private:
  static std::string locate(const std::string& origin, std::string_view source, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return origin + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
  static std::string snippet(std::string_view source, std::size_t offset) {
    if (offset >= source.size()) return "<end>";
    std::size_t end = source.find_first_of(";\n", offset);
    if (end == std::string_view::npos) end = source.size();
    std::string s(source.substr(offset, std::min<std::size_t>(end - offset, 40)));
    return s.empty() ? "<end>" : s;
  }
};

/// Substring of the session source with its absolute offset.
struct Piece {
  std::string text;
  std::size_t offset = 0;

  bool empty() const { return text.empty(); }
};

namespace detail {

inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '@' || c == '/'; }

/// ParseError message without its " at offset N" suffix.
inline std::string strip_offset(const std::string& what) {
  auto at = what.rfind(" at offset ");
  return at == std::string::npos ? what : what.substr(0, at);
}

inline Piece trim(const Piece& p) {
  std::size_t b = 0;
  std::size_t e = p.text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(p.text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(p.text[e - 1]))) --e;
  return Piece{p.text.substr(b, e - b), p.offset + b};
}

/// Splits on `sep` outside parentheses and quotes.
inline std::vector<Piece> split_top(const Piece& p, char sep) {
  std::vector<Piece> out;
  int depth = 0;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= p.text.size(); ++i) {
    char c = i < p.text.size() ? p.text[i] : sep;
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0 && !(c == ';' && i > 0 && p.text[i - 1] == '_')) {  // f_;2 is a slot marker
      Piece part = trim(Piece{p.text.substr(start, i - start), p.offset + start});
      if (!part.empty() || i < p.text.size()) out.push_back(part);
      start = i + 1;
    }
  }
  return out;
}

/// Position of the whole word `w` outside parentheses and quotes, or npos.
inline std::size_t find_word(const std::string& s, const std::string& w, std::size_t from = 0) {
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (i < from || depth != 0) continue;
    if (s.compare(i, w.size(), w) != 0) continue;
    bool left = i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]));
    bool right = i + w.size() == s.size() || std::isspace(static_cast<unsigned char>(s[i + w.size()]));
    if (left && right) return i;
  }
  return std::string::npos;
}

/// Splits "<head> kw1 <a> kw2 <b>" into the head and the keyword sections.
inline std::map<std::string, Piece> sections(const Piece& p, const std::vector<std::string>& keywords, Piece& head) {
  std::vector<std::pair<std::size_t, std::string>> hits;
  for (const auto& k : keywords) {
    std::size_t at = find_word(p.text, k);
    if (at != std::string::npos) hits.emplace_back(at, k);
  }
  std::sort(hits.begin(), hits.end());
  std::map<std::string, Piece> out;
  std::size_t head_end = hits.empty() ? p.text.size() : hits.front().first;
  head = trim(Piece{p.text.substr(0, head_end), p.offset});
  for (std::size_t h = 0; h < hits.size(); ++h) {
    std::size_t b = hits[h].first + hits[h].second.size();
    std::size_t e = h + 1 < hits.size() ? hits[h + 1].first : p.text.size();
    out[hits[h].second] = trim(Piece{p.text.substr(b, e - b), p.offset + b});
  }
  return out;
}

/// Leading identifier and the rest.
inline std::pair<Piece, Piece> head_word(const Piece& p) {
  Piece t = trim(p);
  std::size_t i = 0;
  while (i < t.text.size() && ident_char(t.text[i])) ++i;
  return {Piece{t.text.substr(0, i), t.offset}, trim(Piece{t.text.substr(i), t.offset + i})};
}

}  // namespace detail

/// One command of a session (or of a CLI invocation).
struct Command {
  std::string verb;  // prolong, check, oracle, reduce, hidden, run
  std::string kind;  // lie, qcond, cond, inv, cdi
  std::vector<std::string> ops;
  std::string target;
  std::vector<std::string> given;
  std::string by;
  std::string candidate;
  int order = 1;
  std::string text;
  /// Where the statement came from, for diagnostics raised while executing it.
  std::string origin;
  std::size_t offset = 0;
  std::shared_ptr<const std::string> source;
};

struct NamedObject {
  std::string kind;
  std::string source;
};

class Session;
/// Resolves "@catalog/<id>" by declaring the entry in the session; returns
/// the declared name.
using Importer = std::function<std::string(Session&, const std::string& id)>;

class Session {
 public:
  Session() = default;
  explicit Session(JetSpace space) : space_(std::move(space)) {}

  bool has_space() const { return space_.has_value(); }
  const JetSpace& space() const {
    if (!space_) throw Error("no space declared; start the session with a 'space' statement");
    return *space_;
  }
  void set_importer(Importer imp) { importer_ = std::move(imp); }
  const std::vector<Command>& commands() const { return commands_; }
  const std::map<std::string, NamedObject>& names() const { return names_; }

  /// Reads declarations and commands. Commands are queued, not executed.
  void load(std::string_view source, const std::string& origin = "<session>") {
    std::string src(source);
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i] == '#')
        while (i < src.size() && src[i] != '\n') src[i++] = ' ';
    auto shared = std::make_shared<const std::string>(source);
    for (const Piece& st : detail::split_top(Piece{src, 0}, ';')) {
      if (st.empty()) continue;
      try {
        std::size_t queued = commands_.size();
        statement(st);
        if (commands_.size() > queued) {
          commands_.back().origin = origin;
          commands_.back().offset = st.offset;
          commands_.back().source = shared;
        }
      } catch (const DslError&) {
        throw;
      } catch (const ParseError& e) {
        throw DslError(origin, source, st.offset + e.position(), detail::strip_offset(e.what()));
      } catch (const Error& e) {
        throw DslError(origin, source, st.offset, e.what());
      }
    }
  }

  // -- resolution ---------------------------------------------------------

  std::string resolve_name(const std::string& ref) {
    if (ref.rfind("@catalog/", 0) == 0) {
      if (!importer_) throw UnknownEntryError("catalog references are not available in this session");
      return importer_(*this, ref.substr(9));
    }
    return ref;
  }

  VectorField op(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = ops_.find(name);
    if (it != ops_.end()) return it->second;
    return parse_field(name, space(), name);
  }

  Expression expression(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = exprs_.find(name);
    if (it != exprs_.end()) return it->second;
    return parse_relation(name);
  }

  /// A named invariant list, a named expression, or comma-separated inline expressions.
  std::vector<std::pair<std::string, Expression>> targets(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = lists_.find(name);
    if (it != lists_.end()) return it->second;
    auto e = exprs_.find(name);
    if (e != exprs_.end()) return {{name, e->second}};
    std::vector<std::pair<std::string, Expression>> out;
    for (const Piece& item : detail::split_top(Piece{name, 0}, ',')) {
      try {
        out.emplace_back(item.text, parse_relation(item.text));
      } catch (const UndeclaredSymbolError& err) {
        throw UndeclaredSymbolError(err.name(), item.offset + err.position());
      } catch (const ParseError& err) {
        throw ParseError(detail::strip_offset(err.what()), item.offset + err.position());
      }
    }
    return out;
  }

  ConditionSet conditions(const std::vector<std::string>& refs) {
    ConditionSet cs;
    for (const auto& ref : refs) {
      std::string name = resolve_name(ref);
      if (auto s = condsets_.find(name); s != condsets_.end()) {
        for (const auto& c : s->second.conditions) cs.conditions.push_back(c);
      } else if (auto c = conds_.find(name); c != conds_.end()) {
        cs.conditions.push_back(c->second);
      } else {
        cs.add(parse_relation(name), -1, name);
      }
    }
    return cs;
  }

  Ansatz ansatz(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = ansatze_.find(name);
    if (it == ansatze_.end()) throw Error("unknown ansatz '" + name + "'");
    return it->second;
  }

  /// Named reduction, a named ansatz, or "d/dX" for translation along X.
  Reduction reduction(const std::string& ref) {
    std::string name = resolve_name(ref);
    if (auto it = reductions_.find(name); it != reductions_.end()) return it->second;
    if (auto it = ansatze_.find(name); it != ansatze_.end()) return Reduction::by_ansatz(it->second);
    if (name.rfind("d/d", 0) == 0 && space().independent_index(name.substr(3)) >= 0) return Reduction::by_translation(name.substr(3));
    throw Error("unknown reduction '" + name + "'");
  }

  AffineTransform transform(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = transforms_.find(name);
    if (it == transforms_.end()) throw Error("unknown transformation '" + name + "'");
    return it->second;
  }

  PipelineSpec pipeline(const std::string& ref) {
    std::string name = resolve_name(ref);
    auto it = pipelines_.find(name);
    if (it == pipelines_.end()) throw Error("unknown pipeline '" + name + "'");
    const auto& d = it->second;
    PipelineSpec spec;
    spec.name = name;
    spec.class_label = d.label;
    for (const auto& m : d.members) spec.members.emplace_back(m, expression(m));
    for (const auto& r : d.reductions) spec.reductions.push_back(reduction(r));
    for (const auto& c : d.candidates) spec.candidates.push_back(op(c));
    for (const auto& t : d.transforms) spec.transforms.push_back(transform(t));
    return spec;
  }

  /// "lhs = rhs" as lhs - rhs, or a plain expression.
  Expression parse_relation(const std::string& text) const {
    auto parts = detail::split_top(Piece{text, 0}, '=');
    if (parts.size() == 1) return parse(text, space());
    if (parts.size() != 2) throw ParseError("more than one '=' in relation", 0);
    Expression lhs = parse_piece(parts[0], 0);
    Expression rhs = parse_piece(parts[1], 0);
    return lhs - rhs;
  }

 private:
  struct PipelineDecl {
    std::string label;
    std::vector<std::string> members, reductions, candidates, transforms;
  };

  // Parses a piece; ParseError positions become relative to `base`.
  Expression parse_piece(const Piece& p, std::size_t base, bool basis = false) const {
    try {
      return basis ? parse_with_basis(p.text, space()) : parse(p.text, space());
    } catch (const UndeclaredSymbolError& e) {
      throw UndeclaredSymbolError(e.name(), p.offset - base + e.position());
    } catch (const ParseError& e) {
      throw ParseError(detail::strip_offset(e.what()), p.offset - base + e.position());
    }
  }

  Expression relation_piece(const Piece& p, std::size_t base) const {
    auto parts = detail::split_top(p, '=');
    if (parts.size() == 1) return parse_piece(parts[0], base);
    if (parts.size() != 2) throw ParseError("more than one '=' in relation", p.offset - base);
    return parse_piece(parts[0], base) - parse_piece(parts[1], base);
  }

  void claim(const std::string& name, const std::string& kind, const std::string& source, std::size_t at) {
    if (name.empty()) throw ParseError("expected a name", at);
    auto it = names_.find(name);
    if (it != names_.end()) throw ParseError("name '" + name + "' is already declared", at);
    names_[name] = NamedObject{kind, source};
  }

  // True when `name` already holds an identical declaration (catalog imports).
  bool same_declaration(const std::string& name, const std::string& source) const {
    auto it = names_.find(name);
    return it != names_.end() && it->second.source == source;
  }

  static std::vector<std::string> names_of(const Piece& p) {
    std::vector<std::string> out;
    if (p.empty()) return out;
    for (const auto& part : detail::split_top(p, ',')) out.push_back(part.text);
    return out;
  }

  void statement(const Piece& st) {
    auto [kw, rest] = detail::head_word(st);
    const std::size_t base = st.offset;
    const std::string& k = kw.text;
    if (k == "space") return declare_space_stmt(rest, base);
    if (k == "param" || k == "func") {
      if (!space_) throw ParseError("'" + k + "' before the space declaration", 0);
      for (const auto& n : detail::split_top(rest, ',')) {
        if (k == "param" && space_->is_parameter(n.text)) continue;
        if (k == "func" && space_->is_function(n.text)) continue;
        if (k == "param")
          space_->add_parameter(n.text);
        else
          space_->add_function(n.text);
      }
      return;
    }
    if (k == "op") return op_stmt(rest, base);
    if (k == "cond") return cond_stmt(rest, base);
    if (k == "conds") return conds_stmt(rest, base);
    if (k == "expr") return expr_stmt(rest, base);
    if (k == "invariants") return invariants_stmt(rest, base);
    if (k == "ansatz") return ansatz_stmt(rest, base);
    if (k == "reduction") return reduction_stmt(rest, base);
    if (k == "transform") return transform_stmt(rest, base);
    if (k == "pipeline") return pipeline_stmt(rest, base);
    if (k == "prolong" || k == "check" || k == "oracle" || k == "reduce" || k == "hidden" || k == "run") {
      commands_.push_back(parse_command(k, rest, base));
      commands_.back().text = st.text;
      return;
    }
    throw ParseError("unknown statement '" + k + "'", 0);
  }

  void declare_space_stmt(const Piece& rest, std::size_t base) {
    if (space_) throw ParseError("space declared twice", 0);
    Piece head;
    auto sec = detail::sections(rest, {"order", "metric"}, head);
    auto arrow = head.text.find("->");
    if (arrow == std::string::npos) throw ParseError("expected 'independents -> dependents'", head.offset - base);
    auto indep = names_of(detail::trim(Piece{head.text.substr(0, arrow), head.offset}));
    auto dep = names_of(detail::trim(Piece{head.text.substr(arrow + 2), head.offset + arrow + 2}));
    int order = 2;
    if (sec.count("order")) order = std::stoi(sec["order"].text);
    std::vector<int> metric;
    if (sec.count("metric"))
      for (const auto& m : names_of(sec["metric"])) metric.push_back(std::stoi(m));
    space_ = declare_space(indep, dep, order, metric);
  }

  void op_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, '=', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    parse_piece(parts.second, base, true);
    VectorField f = parse_field(parts.second.text, space(), name);
    claim(name, "operator", rest.text, parts.first.offset - base);
    ops_[name] = f;
  }

  void cond_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, ':', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    Piece head;
    auto sec = detail::sections(parts.second, {"upto"}, head);
    Expression g = relation_piece(head, base);
    int upto = sec.count("upto") ? std::stoi(sec["upto"].text) : -1;
    claim(name, "condition", rest.text, parts.first.offset - base);
    if (g.is_zero()) throw ParseError("condition is identically zero", head.offset - base);
    conds_[name] = Condition{g, upto, name};
  }

  void conds_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, '=', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    ConditionSet cs;
    for (const auto& n : detail::split_top(parts.second, ',')) {
      auto it = conds_.find(n.text);
      if (it == conds_.end()) throw ParseError("unknown condition '" + n.text + "'", n.offset - base);
      cs.conditions.push_back(it->second);
    }
    claim(name, "condition-set", rest.text, parts.first.offset - base);
    condsets_[name] = cs;
  }

  void expr_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, '=', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    Expression e = relation_piece(parts.second, base);
    claim(name, "equation", rest.text, parts.first.offset - base);
    exprs_[name] = e;
  }

  void invariants_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, '=', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    std::vector<std::pair<std::string, Expression>> items;
    for (const auto& item : detail::split_top(parts.second, ',')) {
      auto [w, body] = detail::head_word(item);
      if (w.text == "contract") {
        try {
          items.emplace_back(item.text, contract(space(), body.text));
        } catch (const Error& e) {
          throw ParseError(e.what(), body.offset - base);
        }
      } else {
        items.emplace_back(item.text, parse_piece(item, base));
      }
    }
    claim(name, "invariant-list", rest.text, parts.first.offset - base);
    lists_[name] = items;
  }

  // ansatz r: u = phi(t, r) where r = x^2 + y^2 by J
  void ansatz_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, ':', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    Piece head;
    auto sec = detail::sections(parts.second, {"where", "by"}, head);
    auto eq = split_once(head, '=', base);
    if (space().dependent_index(eq.first.text) < 0) throw ParseError("'" + eq.first.text + "' is not a dependent variable", eq.first.offset - base);
    auto open = eq.second.text.find('(');
    if (open == std::string::npos || eq.second.text.back() != ')') throw ParseError("expected phi(args)", eq.second.offset - base);
    Ansatz a;
    a.name = name;
    a.reduced_dependent = detail::trim(Piece{eq.second.text.substr(0, open), 0}).text;
    std::map<std::string, Expression> defs;
    if (sec.count("where"))
      for (const auto& d : detail::split_top(sec["where"], ',')) {
        auto dv = split_once(d, '=', base);
        defs[dv.first.text] = parse_piece(dv.second, base);
      }
    Piece args{eq.second.text.substr(open + 1, eq.second.text.size() - open - 2), eq.second.offset + open + 1};
    for (const auto& arg : detail::split_top(args, ',')) {
      if (defs.count(arg.text)) {
        a.variables.emplace_back(arg.text, defs[arg.text]);
      } else if (space().independent_index(arg.text) >= 0) {
        a.retained.push_back(arg.text);
      } else {
        throw ParseError("ansatz argument '" + arg.text + "' is neither retained nor defined", arg.offset - base);
      }
    }
    if (sec.count("by"))
      for (const auto& o : detail::split_top(sec["by"], ',')) a.annihilators.push_back(op(o.text));
    claim(name, "ansatz", rest.text, parts.first.offset - base);
    ansatze_[name] = a;
  }

  void reduction_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, '=', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    auto [how, arg] = detail::head_word(parts.second);
    Reduction r;
    if (how.text == "translation") {
      if (space().independent_index(arg.text) < 0) throw ParseError("'" + arg.text + "' is not an independent variable", arg.offset - base);
      r = Reduction::by_translation(arg.text);
    } else if (how.text == "ansatz") {
      r = Reduction::by_ansatz(ansatz(arg.text));
    } else {
      throw ParseError("expected 'translation' or 'ansatz'", how.offset - base);
    }
    claim(name, "reduction", rest.text, parts.first.offset - base);
    reductions_[name] = r;
  }

  // transform boost: t -> 5/4*t + 3/4*x, x -> 3/4*t + 5/4*x, u -> u
  void transform_stmt(const Piece& rest, std::size_t base) {
    auto parts = split_once(rest, ':', base);
    std::string name = parts.first.text;
    if (same_declaration(name, rest.text)) return;
    AffineTransform T;
    T.name = name;
    std::vector<Expression> images;
    std::optional<Expression> u_image;
    for (const auto& m : detail::split_top(parts.second, ',')) {
      auto arrow = m.text.find("->");
      if (arrow == std::string::npos) throw ParseError("expected 'var -> image'", m.offset - base);
      std::string var = detail::trim(Piece{m.text.substr(0, arrow), 0}).text;
      Piece img = detail::trim(Piece{m.text.substr(arrow + 2), m.offset + arrow + 2});
      Expression e = parse_piece(img, base);
      if (space().dependent_index(var) == 0) {
        u_image = e;
      } else if (space().independent_index(var) >= 0) {
        T.vars.push_back(var);
        images.push_back(e);
      } else {
        throw ParseError("'" + var + "' is not a variable of the space", m.offset - base);
      }
    }
    auto constant = [&](const Expression& c, std::size_t at) {
      if (!c.is_constant()) throw ParseError("transformation is not affine with constant coefficients", at);
      return c.constant_value();
    };
    for (const auto& img : images) {
      std::vector<Rational> row;
      Expression rem = img;
      for (const auto& v : T.vars) {
        Expression d = diff(img, space().independent(v));
        row.push_back(constant(d, parts.second.offset - base));
        rem -= d * Expression(space().independent(v));
      }
      T.A.push_back(row);
      T.shift.push_back(constant(rem, parts.second.offset - base));
    }
    if (u_image) {
      Expression d = diff(*u_image, space().dependent(0));
      T.alpha = constant(d, parts.second.offset - base);
      T.beta = constant(*u_image - d * Expression(space().dependent(0)), parts.second.offset - base);
    }
    claim(name, "transform", rest.text, parts.first.offset - base);
    transforms_[name] = T;
  }

  void pipeline_stmt(const Piece& rest, std::size_t base) {
    Piece head;
    auto sec = detail::sections(rest, {"class", "members", "reductions", "candidates", "transforms"}, head);
    std::string name = head.text;
    if (same_declaration(name, rest.text)) return;
    PipelineDecl d;
    if (sec.count("class")) {
      std::string l = sec["class"].text;
      if (l.size() >= 2 && l.front() == '"' && l.back() == '"') l = l.substr(1, l.size() - 2);
      d.label = l;
    }
    d.members = names_of(sec["members"]);
    d.reductions = names_of(sec["reductions"]);
    d.candidates = names_of(sec["candidates"]);
    d.transforms = names_of(sec["transforms"]);
    if (d.members.empty()) throw ParseError("pipeline needs at least one member", head.offset - base);
    if (d.reductions.empty()) throw ParseError("pipeline needs at least one reduction", head.offset - base);
    claim(name, "pipeline", rest.text, head.offset - base);
    pipelines_[name] = d;
  }

  Command parse_command(const std::string& verb, const Piece& rest, std::size_t base) {
    Command c;
    c.verb = verb;
    if (verb == "prolong") {
      Piece head;
      auto sec = detail::sections(rest, {"order"}, head);
      c.ops = {head.text};
      c.order = sec.count("order") ? std::stoi(sec["order"].text) : 1;
      return c;
    }
    if (verb == "check" || verb == "oracle") {
      auto [kind, body] = detail::head_word(rest);
      c.kind = kind.text;
      static const std::vector<std::string> kinds{"lie", "qcond", "cond", "inv", "cdi"};
      if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
        throw ParseError("unknown check kind '" + c.kind + "'", kind.offset - base);
      Piece head;
      auto sec = detail::sections(body, {"on", "given"}, head);
      c.ops = names_of(head);
      if (!sec.count("on")) throw ParseError("expected 'on <target>'", body.offset - base);
      c.target = sec["on"].text;
      c.given = names_of(sec["given"]);
      return c;
    }
    if (verb == "reduce" || verb == "hidden") {
      Piece head;
      auto sec = detail::sections(rest, {"by", "candidate"}, head);
      c.target = head.text;
      c.by = sec["by"].text;
      c.candidate = sec["candidate"].text;
      if (c.by.empty()) throw ParseError("expected 'by <reduction>'", rest.offset - base);
      if (verb == "hidden" && c.candidate.empty()) throw ParseError("expected 'candidate <operator>'", rest.offset - base);
      return c;
    }
    c.target = rest.text;  // run
    return c;
  }

  static std::pair<Piece, Piece> split_once(const Piece& p, char sep, std::size_t base) {
    auto at = p.text.find(sep);
    if (at == std::string::npos) throw ParseError(std::string("expected '") + sep + "'", p.offset - base + p.text.size());
    return {detail::trim(Piece{p.text.substr(0, at), p.offset}), detail::trim(Piece{p.text.substr(at + 1), p.offset + at + 1})};
  }

  std::optional<JetSpace> space_;
  Importer importer_;
  std::map<std::string, NamedObject> names_;
  std::map<std::string, VectorField> ops_;
  std::map<std::string, Condition> conds_;
  std::map<std::string, ConditionSet> condsets_;
  std::map<std::string, Expression> exprs_;
  std::map<std::string, std::vector<std::pair<std::string, Expression>>> lists_;
  std::map<std::string, Ansatz> ansatze_;
  std::map<std::string, Reduction> reductions_;
  std::map<std::string, AffineTransform> transforms_;
  std::map<std::string, PipelineDecl> pipelines_;
  std::vector<Command> commands_;
};

}  // namespace jetsym
