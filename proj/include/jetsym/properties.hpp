#pragma once

// Randomized kernel properties: canonical-form confluence, derivation rules,
// prolongation recursion, manifold normal forms, commutators and flows.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "jetsym/manifold.hpp"
#include "jetsym/oracle.hpp"
#include "jetsym/parser.hpp"
#include "jetsym/printer.hpp"
#include "jetsym/vector_field.hpp"

namespace jetsym {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

/// Random rational expressions over t, x, y, a few u-jets (order <= max_jet),
/// the parameter lambda and the function K(t, u).
class ExpressionGenerator {
 public:
  ExpressionGenerator(const JetSpace& space, std::uint64_t seed, int max_jet = 2) : rng_(seed) {
    for (std::size_t i = 0; i < space.dimension(); ++i) atoms_.push_back(Expression(space.independent(i)));
    for (int k = 0; k <= max_jet; ++k)
      for (Atom a : space.jets_of_order(k)) atoms_.push_back(Expression(a));
    for (const auto& p : space.parameters()) atoms_.push_back(Expression(space.parameter(p)));
    for (const auto& f : space.functions())
      atoms_.push_back(apply_function(f, {Expression(space.independent(0)), Expression(space.dependent(0))}));
  }

  Expression operator()(int depth = 2) {
    if (depth == 0 || pick(4) == 0) return leaf();
    Expression a = (*this)(depth - 1);
    Expression b = (*this)(depth - 1);
    switch (pick(6)) {
      case 0:
      case 1:
        return a + b;
      case 2:
        return a - b;
      case 3:
      case 4:
        return a * b;
      default:
        return b.is_zero() ? a : a / b;
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Expression leaf() {
    int c = pick(7) - 3;
    if (c == 0) c = 2;
    if (pick(5) == 0) return Expression(c);
    Expression a = atoms_[static_cast<std::size_t>(pick(static_cast<int>(atoms_.size())))];
    return Expression(c) * (pick(3) == 0 ? a * a : a);
  }

  std::mt19937_64 rng_;
  std::vector<Expression> atoms_;
};

/// Space used by the property checks: t, x, y -> u up to order 4 with one
/// parameter and one function.
inline JetSpace property_space() {
  JetSpace s = declare_space({"t", "x", "y"}, {"u"}, 4, {1, -1, -1});
  s.add_parameter("lambda");
  s.add_function("K");
  return s;
}

namespace detail {

inline PointMap random_point(const JetSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution sign(0.5);
  PointMap p;
  for (Atom a : space.universe()) p[a] = sign(rng) ? mag(rng) : -mag(rng);
  for (const auto& n : space.parameters()) p[space.parameter(n)] = mag(rng);
  return p;
}

inline FunctionTable property_models(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto model = std::make_shared<PolynomialModel>(2, rng);
  return {{"K", [model](const std::vector<int>& s, const std::vector<double>& a) { return (*model)(s, a); }}};
}

}  // namespace detail

/// Different construction orders of the same value give identical canonical
/// forms; printing and reparsing is the identity; values match the
/// floating-point evaluation of the operands.
inline PropertyResult check_confluence(int pairs = 1000, std::uint64_t seed = kDefaultSeed) {
  PropertyResult r{"canonical-form confluence"};
  JetSpace space = property_space();
  ExpressionGenerator gen(space, seed);
  FunctionTable fns = detail::property_models(seed + 1);
  for (int k = 0; k < pairs; ++k) {
    Expression a = gen();
    Expression b = gen();
    ++r.cases;
    auto bad = [&](const std::string& law) { r.fail(law + " for a = " + to_string(a) + ", b = " + to_string(b)); };
    if (!(a + b == b + a) || !(a * b == b * a)) {
      bad("commutativity");
      continue;
    }
    if (!((a + b) * (a - b) == a * a - b * b)) {
      bad("difference of squares");
      continue;
    }
    if (!((a + b) - b == a)) {
      bad("additive cancellation");
      continue;
    }
    if (!b.is_zero() && !((a / b) * b == a)) {
      bad("multiplicative cancellation");
      continue;
    }
    if (!(a * (b + 1) == a * b + a)) {
      bad("distributivity");
      continue;
    }
    Expression c = a * b + a;
    if (!(parse(to_string(c), space) == c)) {
      bad("print/parse round trip");
      continue;
    }
    PointMap p = detail::random_point(space, gen.rng());
    try {
      double va = eval_numeric(a, p, fns);
      double vb = eval_numeric(b, p, fns);
      double vc = eval_numeric(c, p, fns);
      double want = va * vb + va;
      if (std::abs(vc - want) > 1e-8 * (1.0 + std::abs(va * vb) + std::abs(va))) bad("numeric value");
    } catch (const DomainError&) {
      // a denominator vanished at the sample; the algebraic laws above still hold
    }
  }
  return r;
}

/// D_i D_j e = D_j D_i e, Leibniz rule for D_i and for partial derivatives.
inline PropertyResult check_total_derivatives(int cases = 300, std::uint64_t seed = kDefaultSeed) {
  PropertyResult r{"total derivative commutation and Leibniz rule"};
  JetSpace space = property_space();
  ExpressionGenerator gen(space, seed + 2);
  for (int k = 0; k < cases; ++k) {
    Expression a = gen();
    Expression b = gen();
    ++r.cases;
    bool ok = true;
    for (std::size_t i = 0; i < space.dimension() && ok; ++i) {
      for (std::size_t j = i + 1; j < space.dimension() && ok; ++j)
        if (!(total_derivative(space, total_derivative(space, a, j), i) == total_derivative(space, total_derivative(space, a, i), j))) {
          r.fail("D_" + std::to_string(i) + " D_" + std::to_string(j) + " differ on " + to_string(a));
          ok = false;
        }
      if (ok && !(total_derivative(space, a * b, i) == total_derivative(space, a, i) * b + a * total_derivative(space, b, i))) {
        r.fail("Leibniz rule for D_" + std::to_string(i) + " on " + to_string(a) + " and " + to_string(b));
        ok = false;
      }
    }
    Atom ux = space.jet(0, {1});
    if (ok && !(diff(a * b, ux) == diff(a, ux) * b + a * diff(b, ux))) r.fail("Leibniz rule for d/du_x on " + to_string(a));
  }
  return r;
}

/// Normal forms modulo a condition manifold are idempotent and stable under
/// adding multiples of the generators.
inline PropertyResult check_reduce_idempotent(int cases = 500, std::uint64_t seed = kDefaultSeed) {
  PropertyResult r{"reduce_modulo idempotence"};
  JetSpace space = property_space().with_max_order(2);
  ConditionSet cs;
  Expression g = parse("x*u_y - y*u_x", space);
  cs.add(g, 1, "rot");
  ConstraintManifold m = build_manifold(space, cs);
  ExpressionGenerator gen(space, seed + 3);
  for (int k = 0; k < cases; ++k) {
    Expression e = gen();
    ++r.cases;
    Expression once = reduce_modulo(m, e);
    if (!(reduce_modulo(m, once) == once)) {
      r.fail("normal form not idempotent on " + to_string(e));
      continue;
    }
    Expression shifted = e + gen.operator()(1) * g;
    if (!(reduce_modulo(m, shifted) == once)) r.fail("normal form changed by a multiple of the condition on " + to_string(e));
  }
  return r;
}

/// Point fields used by the prolongation, commutator and flow properties.
inline std::vector<VectorField> property_fields(const JetSpace& space) {
  return {
      parse_field("x*d/dy - y*d/dx", space, "J"),
      parse_field("t*d/dx + x*d/dt", space, "J01"),
      parse_field("t*d/dy + y*d/dt", space, "J02"),
      parse_field("2*t*d/dt + x*d/dx + y*d/dy - u*d/du", space, "scaling"),
      parse_field("t^2*d/dt + t*x*d/dx + t*y*d/dy - (t*u/2)*d/du", space, "projective"),
      parse_field("x*u*d/dt + (t + y^2)*d/dx + u^2*d/du", space, "nonlinear"),
      parse_field("K(t, y)*d/dx + lambda*x*d/du", space, "functional"),
  };
}

/// Every prolongation coefficient up to order 3 is recomputed along a second
/// index route and through the characteristic form.
inline PropertyResult check_prolongation_recursion() {
  PropertyResult r{"prolongation recursion recomputation"};
  JetSpace space = property_space();
  for (const auto& f : property_fields(space)) {
    ++r.cases;
    if (!prolong(f, space, 3).recheck()) r.fail("prolongation of " + f.name + " disagrees with its recomputation");
  }
  return r;
}

/// Commutators: antisymmetry, the Jacobi identity, and closure of the
/// Lorentz algebra spanned by J01, J02, J.
inline PropertyResult check_commutators() {
  PropertyResult r{"commutator closure and Jacobi identity"};
  JetSpace space = property_space();
  auto fs = property_fields(space);
  auto zero = [&](const VectorField& v) {
    for (const auto& c : v.xi)
      if (!c.is_zero()) return false;
    for (const auto& c : v.eta)
      if (!c.is_zero()) return false;
    return true;
  };
  auto sum = [&](const VectorField& a, const VectorField& b) {
    VectorField out = a;
    for (std::size_t i = 0; i < out.xi.size(); ++i) out.xi[i] += b.xi[i];
    for (std::size_t i = 0; i < out.eta.size(); ++i) out.eta[i] += b.eta[i];
    return out;
  };
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) {
      ++r.cases;
      if (!zero(sum(commutator(fs[i], fs[j], space), commutator(fs[j], fs[i], space))))
        r.fail("[" + fs[i].name + ", " + fs[j].name + "] is not antisymmetric");
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const auto& a = fs[i];
        const auto& b = fs[j];
        const auto& c = fs[k];
        VectorField jac = sum(sum(commutator(commutator(a, b, space), c, space), commutator(commutator(b, c, space), a, space)),
                              commutator(commutator(c, a, space), b, space));
        ++r.cases;
        if (!zero(jac)) r.fail("Jacobi identity fails for " + a.name + ", " + b.name + ", " + c.name);
      }
    }
  std::vector<VectorField> lorentz(fs.begin(), fs.begin() + 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      ++r.cases;
      VectorField c = commutator(lorentz[i], lorentz[j], space);
      bool in_span = false;
      for (const auto& l : lorentz)
        for (int s : {1, -1})
          if (same_field(c, scaled(l, Expression(s)))) in_span = true;
      if (!in_span) r.fail("[" + lorentz[i].name + ", " + lorentz[j].name + "] leaves the Lorentz algebra");
    }
  return r;
}

/// flow(flow(p, a), b) = flow(p, a + b) for the integrated flows, and the
/// closed-form flows match the integrator.
inline PropertyResult check_flow_group_law(int points = 5, std::uint64_t seed = kDefaultSeed) {
  PropertyResult r{"flow group law"};
  JetSpace space = property_space().with_max_order(2);
  std::mt19937_64 rng(seed + 4);
  FunctionTable fns = detail::property_models(seed + 5);
  const std::vector<std::pair<double, double>> steps{{0.2, 0.1}, {-0.15, 0.35}, {0.3, -0.3}};
  for (const auto& f : property_fields(space)) {
    if (f.name == "projective" || f.name == "nonlinear") continue;  // finite-time blow-up near sampled points
    Flow flow(prolong(f, space, 2), fns);
    Sampler sampler(space, 2, nullptr, fns, flow.velocities());
    for (int k = 0; k < points; ++k) {
      JetPoint p = sampler.draw(rng);
      for (const auto& [a, b] : steps) {
        ++r.cases;
        try {
          JetPoint two = flow.integrate(flow.integrate(p, a).point, b).point;
          JetPoint one = flow.integrate(p, a + b).point;
          double dev = 0.0;
          for (const auto& [c, v] : one) dev = std::max(dev, std::abs(two.at(c) - v) / (1.0 + std::abs(v)));
          if (flow.has_closed_form()) {
            JetPoint exact = flow.closed_form(p, a + b).point;
            for (const auto& [c, v] : exact) dev = std::max(dev, std::abs(one.at(c) - v) / (1.0 + std::abs(v)));
          }
          if (dev > 1e-8) r.fail("group law deviation " + std::to_string(dev) + " for " + f.name);
        } catch (const IntegrationError& e) {
          r.fail(std::string("integration failed for ") + f.name + ": " + e.what());
        }
      }
    }
  }
  return r;
}

}  // namespace jetsym
