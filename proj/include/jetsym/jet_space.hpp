#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/expression.hpp"
#include "jetsym/operations.hpp"

namespace jetsym {

/// Ambient jet space: independent variables, dependent variables, maximal
/// derivative order, optional diagonal metric, plus the parameter and opaque
/// function names expressions in this space may use.
class JetSpace {
 public:
  static constexpr int kOrderCap = 4;

  JetSpace() = default;

  static JetSpace declare(std::vector<std::string> independents, std::vector<std::string> dependents, int max_order,
                          std::vector<int> metric = {}) {
    if (independents.empty() || dependents.empty()) throw Error("a jet space needs at least one independent and one dependent variable");
    if (max_order < 1 || max_order > kOrderCap)
      throw OrderOverflowError("maximal order " + std::to_string(max_order) + " outside [0, " + std::to_string(kOrderCap) + "]");
    if (!metric.empty()) {
      if (metric.size() != independents.size()) throw Error("metric signature length differs from the number of independent variables");
      for (int g : metric)
        if (g != 1 && g != -1) throw Error("metric entries must be +1 or -1");
    }
    JetSpace s;
    s.independents_ = std::move(independents);
    s.dependents_ = std::move(dependents);
    s.max_order_ = max_order;
    s.metric_ = std::move(metric);
    for (const auto& n : s.independents_) s.claim(n);
    for (const auto& n : s.dependents_) s.claim(n);
    return s;
  }

  JetSpace& add_parameter(const std::string& name) {
    claim(name);
    parameters_.push_back(name);
    return *this;
  }

  JetSpace& add_function(const std::string& name) {
    claim(name);
    functions_.insert(name);
    return *this;
  }

  /// Same declarations with a different maximal order.
  JetSpace with_max_order(int k) const {
    if (k < 1 || k > kOrderCap) throw OrderOverflowError("maximal order " + std::to_string(k) + " exceeds the cap " + std::to_string(kOrderCap));
    JetSpace s = *this;
    s.max_order_ = k;
    return s;
  }

  const std::vector<std::string>& independents() const { return independents_; }
  const std::vector<std::string>& dependents() const { return dependents_; }
  const std::vector<std::string>& parameters() const { return parameters_; }
  const std::set<std::string>& functions() const { return functions_; }
  int max_order() const { return max_order_; }
  bool has_metric() const { return !metric_.empty(); }
  /// Metric signature; Euclidean when none was declared.
  std::vector<int> metric() const { return metric_.empty() ? std::vector<int>(independents_.size(), 1) : metric_; }
  const std::vector<int>& declared_metric() const { return metric_; }
  std::size_t dimension() const { return independents_.size(); }

  int independent_index(const std::string& name) const { return index_of(independents_, name); }
  int dependent_index(const std::string& name) const { return index_of(dependents_, name); }
  bool is_parameter(const std::string& name) const { return index_of(parameters_, name) >= 0; }
  bool is_function(const std::string& name) const { return functions_.count(name) > 0; }

  Atom independent(std::size_t i) const { return make_independent(independents_.at(i)); }
  Atom independent(const std::string& name) const {
    if (independent_index(name) < 0) throw Error("'" + name + "' is not an independent variable of this space");
    return make_independent(name);
  }
  Atom dependent(std::size_t r = 0) const { return make_jet(dependents_.at(r)); }
  Atom parameter(const std::string& name) const {
    if (!is_parameter(name)) throw Error("'" + name + "' is not a declared parameter");
    return make_parameter(name);
  }

  /// Jet coordinate u^r_J for a multi-index of independent positions (any order).
  Atom jet(std::size_t r, std::vector<int> multi) const {
    if (static_cast<int>(multi.size()) > max_order_)
      throw OrderOverflowError("derivative order " + std::to_string(multi.size()) + " exceeds maximal order " + std::to_string(max_order_));
    std::sort(multi.begin(), multi.end());
    std::vector<std::string> names;
    for (int i : multi) names.push_back(independents_.at(static_cast<std::size_t>(i)));
    return make_jet(dependents_.at(r), std::move(names));
  }

  /// Multi-index (independent positions, ascending) of a jet coordinate of this space.
  std::vector<int> multi_index(Atom c) const {
    std::vector<int> out;
    for (const auto& n : c.node().index) {
      int i = independent_index(n);
      if (i < 0) throw Error("jet " + to_string(c) + " does not belong to this space");
      out.push_back(i);
    }
    return out;
  }

  bool owns(Atom c) const {
    switch (c.kind()) {
      case AtomKind::Independent:
        return independent_index(c.name()) >= 0;
      case AtomKind::Parameter:
        return is_parameter(c.name());
      case AtomKind::Dependent:
        if (dependent_index(c.name()) < 0) return false;
        for (const auto& n : c.node().index)
          if (independent_index(n) < 0) return false;
        return true;
      default:
        return false;
    }
  }

  /// u^r_{J+i}; throws OrderOverflowError past the maximal order.
  Atom raise(Atom c, std::size_t i) const {
    int r = dependent_index(c.name());
    if (!c.is_dependent() || r < 0) throw Error(to_string(c) + " is not a jet coordinate of this space");
    std::vector<int> m = multi_index(c);
    if (static_cast<int>(m.size()) + 1 > max_order_)
      throw OrderOverflowError("total derivative of " + to_string(c) + " exceeds maximal order " + std::to_string(max_order_));
    m.push_back(static_cast<int>(i));
    return jet(static_cast<std::size_t>(r), std::move(m));
  }

  /// All sorted multi-indices of exactly the given order.
  std::vector<std::vector<int>> multi_indices(int order) const {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    const int n = static_cast<int>(independents_.size());
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(cur.size()) == order) {
        out.push_back(cur);
        return;
      }
      for (int i = start; i < n; ++i) {
        cur.push_back(i);
        rec(i);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  /// Jet coordinates of the given order for every dependent variable.
  std::vector<Atom> jets_of_order(int order) const {
    std::vector<Atom> out;
    for (std::size_t r = 0; r < dependents_.size(); ++r)
      for (const auto& m : multi_indices(order)) out.push_back(jet(r, m));
    return out;
  }

  /// Independents, then dependents and their jets by increasing order.
  std::vector<Atom> universe() const {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < independents_.size(); ++i) out.push_back(independent(i));
    for (int k = 0; k <= max_order_; ++k) {
      auto js = jets_of_order(k);
      out.insert(out.end(), js.begin(), js.end());
    }
    return out;
  }

  /// Resolves a written jet name like "u_xy" (suffix letters in any order).
  /// Returns false when `text` is not of that shape for this space.
  bool resolve_jet(const std::string& text, Atom& out) const {
    auto us = text.find('_');
    if (us == std::string::npos) return false;
    std::string base = text.substr(0, us);
    std::string suffix = text.substr(us + 1);
    int r = dependent_index(base);
    if (r < 0 || suffix.empty()) return false;
    std::vector<int> multi;
    std::size_t pos = 0;
    while (pos < suffix.size()) {
      int best = -1;
      std::size_t best_len = 0;
      for (std::size_t i = 0; i < independents_.size(); ++i) {
        const auto& n = independents_[i];
        if (n.size() > best_len && suffix.compare(pos, n.size(), n) == 0) {
          best = static_cast<int>(i);
          best_len = n.size();
        }
      }
      if (best < 0) return false;
      multi.push_back(best);
      pos += best_len;
    }
    out = jet(static_cast<std::size_t>(r), multi);
    return true;
  }

 private:
  static int index_of(const std::vector<std::string>& v, const std::string& name) {
    auto it = std::find(v.begin(), v.end(), name);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
  }

  void claim(const std::string& name) {
    if (name.empty()) throw Error("empty name");
    if (!names_.insert(name).second) throw DuplicateNameError("name '" + name + "' declared twice");
  }

  std::vector<std::string> independents_;
  std::vector<std::string> dependents_;
  std::vector<std::string> parameters_;
  std::set<std::string> functions_;
  std::set<std::string> names_;
  std::vector<int> metric_;
  int max_order_ = 1;
};

inline JetSpace declare_space(std::vector<std::string> independents, std::vector<std::string> dependents, int max_order,
                              std::vector<int> metric = {}) {
  return JetSpace::declare(std::move(independents), std::move(dependents), max_order, std::move(metric));
}

// ---------------------------------------------------------------------------
// Total derivatives

/// D_i e = de/dx_i + sum over jets u_J in e of u_{J+i} de/du_J.
inline Expression total_derivative(const JetSpace& space, const Expression& e, std::size_t i) {
  Expression out = diff(e, space.independent(i));
  for (Atom c : coordinates_of(e)) {
    if (!c.is_dependent()) continue;
    if (space.dependent_index(c.name()) < 0) throw Error(to_string(c) + " is not a coordinate of this space");
    Expression dc = diff(e, c);
    if (dc.is_zero()) continue;
    out += Expression(space.raise(c, i)) * dc;
  }
  return out;
}

inline Expression total_derivative(const JetSpace& space, const Expression& e, const std::vector<int>& multi) {
  Expression out = e;
  for (int i : multi) out = total_derivative(space, out, static_cast<std::size_t>(i));
  return out;
}

// ---------------------------------------------------------------------------
// Index contraction

/// Coordinate with lowered index, g_ii * x_i.
inline Expression lowered_coordinate(const JetSpace& space, std::size_t i) {
  return Expression(static_cast<long>(space.metric().at(i))) * Expression(space.independent(i));
}

/// Fully contracted product written in index notation, e.g. "x_a*x_a",
/// "u_a*u_ab*u_b" or "u_aa". Factor families are `x` (lowered coordinates)
/// and declared dependent names (jets). Every index letter must occur exactly
/// twice; each contracted pair carries the metric weight g_aa. `range`
/// restricts the summation to a subset of independent positions.
inline Expression contract(const JetSpace& space, const std::string& pattern, std::vector<int> range = {}) {
  if (!space.has_metric()) throw Error("contraction requires a declared metric");
  if (range.empty())
    for (std::size_t i = 0; i < space.dimension(); ++i) range.push_back(static_cast<int>(i));

  struct Factor {
    bool coordinate = false;
    std::size_t dependent = 0;
    std::string indices;
  };
  std::vector<Factor> factors;
  std::map<char, int> counts;
  std::size_t pos = 0;
  while (pos <= pattern.size()) {
    std::size_t end = pattern.find('*', pos);
    if (end == std::string::npos) end = pattern.size();
    std::string tok = pattern.substr(pos, end - pos);
    tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
    if (tok.empty()) throw ParseError("empty factor in contraction pattern", pos);
    Factor f;
    auto us = tok.find('_');
    std::string family = tok.substr(0, us);
    if (us != std::string::npos) f.indices = tok.substr(us + 1);
    if (family == "x") {
      if (f.indices.size() != 1) throw ParseError("coordinate factor needs exactly one index", pos);
      f.coordinate = true;
    } else {
      int r = space.dependent_index(family);
      if (r < 0) throw UndeclaredSymbolError(family, pos);
      f.dependent = static_cast<std::size_t>(r);
    }
    for (char c : f.indices) counts[c]++;
    factors.push_back(f);
    pos = end + 1;
  }
  std::vector<char> letters;
  for (const auto& [c, n] : counts) {
    if (n != 2) throw ParseError(std::string("index '") + c + "' must appear exactly twice", 0);
    letters.push_back(c);
  }

  const std::vector<int> g = space.metric();
  Expression total;
  std::map<char, int> value;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == letters.size()) {
      Expression term(1L);
      for (char c : letters) term *= Expression(static_cast<long>(g[static_cast<std::size_t>(value[c])]));
      for (const auto& f : factors) {
        if (f.coordinate) {
          term *= lowered_coordinate(space, static_cast<std::size_t>(value[f.indices[0]]));
        } else {
          std::vector<int> multi;
          for (char c : f.indices) multi.push_back(value[c]);
          term *= Expression(space.jet(f.dependent, multi));
        }
      }
      total += term;
      return;
    }
    for (int i : range) {
      value[letters[k]] = i;
      rec(k + 1);
    }
  };
  rec(0);
  return total;
}

}  // namespace jetsym
