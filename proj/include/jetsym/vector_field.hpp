#pragma once

#include <map>
#include <string>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/jet_space.hpp"
#include "jetsym/operations.hpp"
#include "jetsym/parser.hpp"
#include "jetsym/printer.hpp"

namespace jetsym {

/// Point vector field xi^i d/dx_i + eta^r d/du^r.
struct VectorField {
  std::string name;
  std::vector<Expression> xi;
  std::vector<Expression> eta;
};

namespace detail {

inline void require_point_coefficient(const Expression& c, const std::string& what) {
  for (Atom a : coordinates_of(c)) {
    if (a.is_dependent() && a.order() > 0)
      throw Error(what + " coefficient depends on derivative " + to_string(a) + "; only point fields are supported");
    if (a.kind() == AtomKind::Internal) throw Error(what + " coefficient is not linear in the basis fields");
  }
}

}  // namespace detail

inline VectorField make_field(const JetSpace& space, std::vector<Expression> xi, std::vector<Expression> eta, std::string name = "") {
  if (xi.size() != space.dimension() || eta.size() != space.dependents().size())
    throw Error("vector field component count does not match the jet space");
  for (const auto& c : xi) detail::require_point_coefficient(c, "xi");
  for (const auto& c : eta) detail::require_point_coefficient(c, "eta");
  return VectorField{std::move(name), std::move(xi), std::move(eta)};
}

/// Parses "x*d/dy - y*d/dx + expr*d/du".
inline VectorField parse_field(std::string_view text, const JetSpace& space, std::string name = "") {
  Expression e = parse_with_basis(text, space);
  std::vector<Expression> xi;
  std::vector<Expression> eta;
  Expression rest = e;
  auto take = [&](const std::string& var) {
    Atom basis = make_internal("d/d" + var);
    Expression c = diff(e, basis);
    rest -= c * Expression(basis);
    return c;
  };
  for (const auto& x : space.independents()) xi.push_back(take(x));
  for (const auto& u : space.dependents()) eta.push_back(take(u));
  if (!rest.is_zero()) throw ParseError("operator text has terms without a basis field: " + to_string(rest), 0);
  return make_field(space, std::move(xi), std::move(eta), std::move(name));
}

inline std::string to_string(const VectorField& f, const JetSpace& space) {
  std::string s;
  auto add = [&](const Expression& c, const std::string& var) {
    if (c.is_zero()) return;
    std::string basis = "d/d" + var;
    std::string cs = to_string(c);
    std::string term;
    if (c == Expression(1L)) {
      term = basis;
    } else if (c == Expression(-1L)) {
      term = "-" + basis;
    } else if (c.numerator().size() > 1) {
      term = "(" + cs + ")*" + basis;
    } else {
      term = cs + "*" + basis;
    }
    if (s.empty()) {
      s = term;
    } else if (term[0] == '-') {
      s += " - " + term.substr(1);
    } else {
      s += " + " + term;
    }
  };
  for (std::size_t i = 0; i < f.xi.size(); ++i) add(f.xi[i], space.independents()[i]);
  for (std::size_t r = 0; r < f.eta.size(); ++r) add(f.eta[r], space.dependents()[r]);
  return s.empty() ? "0" : s;
}

/// Q[u]^r = eta^r - xi^i u^r_i.
inline std::vector<Expression> characteristic(const VectorField& f, const JetSpace& space) {
  std::vector<Expression> out;
  for (std::size_t r = 0; r < space.dependents().size(); ++r) {
    Expression q = f.eta[r];
    for (std::size_t i = 0; i < space.dimension(); ++i) q -= f.xi[i] * Expression(space.jet(r, {static_cast<int>(i)}));
    out.push_back(q);
  }
  return out;
}

/// Action of the unprolonged field on a function of (x, u).
inline Expression apply_point(const VectorField& f, const JetSpace& space, const Expression& e) {
  Expression out;
  for (std::size_t i = 0; i < space.dimension(); ++i)
    if (!f.xi[i].is_zero()) out += f.xi[i] * diff(e, space.independent(i));
  for (std::size_t r = 0; r < space.dependents().size(); ++r)
    if (!f.eta[r].is_zero()) out += f.eta[r] * diff(e, space.dependent(r));
  return out;
}

/// [A, B] = A o B - B o A.
inline VectorField commutator(const VectorField& a, const VectorField& b, const JetSpace& space) {
  VectorField c;
  c.name = "[" + a.name + "," + b.name + "]";
  for (std::size_t i = 0; i < space.dimension(); ++i)
    c.xi.push_back(apply_point(a, space, b.xi[i]) - apply_point(b, space, a.xi[i]));
  for (std::size_t r = 0; r < space.dependents().size(); ++r)
    c.eta.push_back(apply_point(a, space, b.eta[r]) - apply_point(b, space, a.eta[r]));
  return c;
}

inline VectorField scaled(const VectorField& f, const Expression& c) {
  VectorField g = f;
  for (auto& x : g.xi) x *= c;
  for (auto& e : g.eta) e *= c;
  return g;
}

inline bool same_field(const VectorField& a, const VectorField& b) { return a.xi == b.xi && a.eta == b.eta; }

/// k-th prolongation with every coefficient eta^{r,J}, |J| <= k, precomputed.
class ProlongedField {
 public:
  ProlongedField(VectorField base, JetSpace space, int order) : base_(std::move(base)), space_(std::move(space)), order_(order) {
    if (order_ < 0) throw Error("negative prolongation order");
    for (std::size_t r = 0; r < space_.dependents().size(); ++r) coefficients_.emplace(space_.dependent(r), base_.eta[r]);
    std::vector<Expression> dxi;  // D_i xi^j, row-major
    for (std::size_t i = 0; i < space_.dimension(); ++i)
      for (std::size_t j = 0; j < space_.dimension(); ++j) dxi.push_back(total_derivative(space_, base_.xi[j], i));
    const std::size_t n = space_.dimension();
    for (int k = 1; k <= order_; ++k) {
      for (std::size_t r = 0; r < space_.dependents().size(); ++r) {
        for (const auto& multi : space_.multi_indices(k)) {
          std::vector<int> parent(multi.begin(), multi.end() - 1);
          const std::size_t i = static_cast<std::size_t>(multi.back());
          Atom target = space_.jet(r, multi);
          coefficients_.emplace(target, step(r, parent, i, dxi, n));
        }
      }
    }
  }

  const VectorField& base() const { return base_; }
  const JetSpace& space() const { return space_; }
  int order() const { return order_; }
  const std::map<Atom, Expression, AtomLess>& coefficients() const { return coefficients_; }

  const Expression& coefficient(Atom jet) const {
    auto it = coefficients_.find(jet);
    if (it == coefficients_.end()) throw OrderOverflowError("no prolongation coefficient for " + to_string(jet));
    return it->second;
  }

  /// Velocity of coordinate c under the field (xi, eta or eta^J); zero for parameters.
  Expression velocity(Atom c) const {
    if (c.is_independent()) return base_.xi.at(static_cast<std::size_t>(space_.independent_index(c.name())));
    if (c.is_dependent()) return coefficient(c);
    return Expression();
  }

  /// Sum of xi^i de/dx_i + eta^{r,J} de/du^r_J.
  Expression apply(const Expression& e) const {
    Expression out;
    for (Atom c : coordinates_of(e)) {
      if (c.is_parameter()) continue;
      if (c.is_dependent() && c.order() > order_)
        throw OrderOverflowError("expression has order " + std::to_string(c.order()) + " but the prolongation has order " + std::to_string(order_));
      Expression v = velocity(c);
      if (v.is_zero()) continue;
      out += v * diff(e, c);
    }
    return out;
  }

  /// Recomputes every coefficient along a different route: the first index of
  /// J instead of the last, and (when the order cap allows) the closed form
  /// eta^J = D_J(Q[u]) + xi^i u_{J,i}. True iff every route agrees.
  bool recheck() const {
    const std::size_t n = space_.dimension();
    std::vector<Expression> dxi;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dxi.push_back(total_derivative(space_, base_.xi[j], i));
    const bool closed_form = order_ + 1 <= JetSpace::kOrderCap;
    JetSpace wide = closed_form ? space_.with_max_order(std::max(order_ + 1, space_.max_order())) : space_;
    std::vector<Expression> q = characteristic(base_, space_);
    for (const auto& [jet, eta] : coefficients_) {
      std::size_t r = static_cast<std::size_t>(space_.dependent_index(jet.name()));
      std::vector<int> multi = space_.multi_index(jet);
      if (multi.size() >= 1) {
        std::vector<int> parent(multi.begin() + 1, multi.end());
        if (!(step(r, parent, static_cast<std::size_t>(multi.front()), dxi, n) == eta)) return false;
      }
      if (closed_form) {
        Expression alt = total_derivative(wide, q[r], multi);
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<int> up = multi;
          up.push_back(static_cast<int>(i));
          alt += base_.xi[i] * Expression(wide.jet(r, up));
        }
        if (!(alt == eta)) return false;
      }
    }
    return true;
  }

 private:
  // eta^{r, parent+i} = D_i eta^{r, parent} - sum_j u^r_{parent+j} D_i xi^j
  Expression step(std::size_t r, const std::vector<int>& parent, std::size_t i, const std::vector<Expression>& dxi, std::size_t n) const {
    Expression out = total_derivative(space_, coefficient(space_.jet(r, parent)), i);
    for (std::size_t j = 0; j < n; ++j) {
      const Expression& d = dxi[i * n + j];
      if (d.is_zero()) continue;
      std::vector<int> up = parent;
      up.push_back(static_cast<int>(j));
      out -= Expression(space_.jet(r, up)) * d;
    }
    return out;
  }

  VectorField base_;
  JetSpace space_;
  int order_;
  std::map<Atom, Expression, AtomLess> coefficients_;
};

/// k-th prolongation. The space's maximal order is raised to k when needed
/// (up to the cap).
inline ProlongedField prolong(const VectorField& field, const JetSpace& space, int k) {
  if (k > JetSpace::kOrderCap) throw OrderOverflowError("prolongation order " + std::to_string(k) + " exceeds the cap");
  return ProlongedField(field, k > space.max_order() ? space.with_max_order(k) : space, k);
}

}  // namespace jetsym
