#pragma once

// Numeric cross-checks: prolonged flows on jet space, random on-manifold
// sampling, and flow-based invariance tests for every check kind.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jetsym/checks.hpp"
#include "jetsym/error.hpp"
#include "jetsym/manifold.hpp"
#include "jetsym/operations.hpp"
#include "jetsym/vector_field.hpp"

namespace jetsym {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

using JetPoint = PointMap;

struct FlowStats {
  int steps = 0;
  int rejected = 0;
  double error_estimate = 0.0;
  bool closed_form = false;

  /// Summed local error estimates stay below 1e-10 (always true for closed forms).
  bool accepted() const { return error_estimate < 1e-10; }
};

struct FlowResult {
  JetPoint point;
  double theta = 0.0;
  FlowStats stats;
};

/// Random polynomial of bounded total degree standing in for an arbitrary
/// function; derivative slots are differentiated exactly.
class PolynomialModel {
 public:
  PolynomialModel(int arity, std::mt19937_64& rng, int degree = 3) : arity_(arity) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<int> e(static_cast<std::size_t>(arity), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == arity_) {
        exps_.push_back(e);
        coefs_.push_back(coef(rng));
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[static_cast<std::size_t>(pos)] = k;
        self(self, pos + 1, left - k);
      }
      e[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, degree);
    coefs_.front() += 1.5;  // keep the constant term away from zero
  }

  double operator()(const std::vector<int>& slots, const std::vector<double>& args) const {
    if (static_cast<int>(args.size()) != arity_) throw Error("function model called with the wrong number of arguments");
    double sum = 0.0;
    for (std::size_t m = 0; m < exps_.size(); ++m) {
      std::vector<int> e = exps_[m];
      double c = coefs_[m];
      for (int s : slots) {
        int& k = e.at(static_cast<std::size_t>(s - 1));
        c *= k;
        if (k == 0) break;
        --k;
      }
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < e.size(); ++i) c *= std::pow(args[i], e[i]);
      sum += c;
    }
    return sum;
  }

 private:
  int arity_;
  std::vector<std::vector<int>> exps_;
  std::vector<double> coefs_;
};

/// One random model per function name occurring in `exprs`.
inline FunctionTable random_models(const std::vector<Expression>& exprs, std::mt19937_64& rng) {
  std::map<std::string, std::size_t> arity;
  for (const auto& e : exprs) {
    for (Atom f : functions_of(e)) {
      const auto& n = f.node();
      auto [it, fresh] = arity.emplace(n.name, n.args.size());
      if (!fresh && it->second != n.args.size()) throw Error("function '" + n.name + "' is used with different arities");
    }
  }
  FunctionTable table;
  for (const auto& [name, k] : arity) {
    auto model = std::make_shared<PolynomialModel>(static_cast<int>(k), rng);
    table[name] = [model](const std::vector<int>& slots, const std::vector<double>& args) { return (*model)(slots, args); };
  }
  return table;
}

/// Flow of a prolonged field. Fields with xi affine in x and eta^r affine in
/// u^r (constant coefficients) also have an exact flow via a matrix exponential.
class Flow {
 public:
  explicit Flow(ProlongedField pf, FunctionTable fns = {}) : pf_(std::move(pf)), fns_(std::move(fns)) {
    const JetSpace& s = pf_.space();
    for (std::size_t i = 0; i < s.dimension(); ++i) coords_.push_back(s.independent(i));
    for (int k = 0; k <= pf_.order(); ++k)
      for (Atom a : s.jets_of_order(k)) coords_.push_back(a);
    for (Atom c : coords_) velocities_.push_back(pf_.velocity(c));
    detect_linear();
  }

  const ProlongedField& field() const { return pf_; }
  const std::vector<Atom>& coordinates() const { return coords_; }
  const std::vector<Expression>& velocities() const { return velocities_; }
  const FunctionTable& functions() const { return fns_; }
  bool has_closed_form() const { return linear_.has_value(); }

  /// Closed form when available, adaptive integration otherwise.
  FlowResult operator()(const JetPoint& p, double theta) const { return has_closed_form() ? closed_form(p, theta) : integrate(p, theta); }

  /// Dormand-Prince 5(4) with absolute and relative tolerance `tol`.
  FlowResult integrate(const JetPoint& p, double theta, double tol = 1e-12) const {
    check_theta(theta);
    FlowResult out{p, theta, {}};
    if (theta == 0.0) return out;
    require_regular(p);
    const std::size_t n = coords_.size();
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = value(p, coords_[j]);

    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double e[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    const double dir = theta > 0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = theta / 16.0;
    std::vector<std::vector<double>> k(7, std::vector<double>(n));
    k[0] = eval_velocity(p, y);
    std::vector<double> stage(n);
    std::vector<double> ynew(n);
    for (int iter = 0;; ++iter) {
      if (iter > 200000) throw IntegrationError("flow integration exceeded the step limit");
      if (dir * (t + h - theta) > 0) h = theta - t;
      for (int s = 1; s < 7; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
          double acc = y[j];
          for (int q = 0; q < s; ++q) acc += h * a[s][q] * k[static_cast<std::size_t>(q)][j];
          stage[j] = acc;
        }
        k[static_cast<std::size_t>(s)] = eval_velocity(p, stage);
      }
      ynew = stage;  // stage 7 is the fifth-order solution
      double norm = 0.0;
      double rel = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double err = 0.0;
        for (int q = 0; q < 7; ++q) err += e[q] * k[static_cast<std::size_t>(q)][j];
        err = std::abs(h * err);
        double scale = tol + tol * std::max(std::abs(y[j]), std::abs(ynew[j]));
        norm = std::max(norm, err / scale);
        rel = std::max(rel, err / (1.0 + std::abs(ynew[j])));
      }
      if (!std::isfinite(norm)) throw IntegrationError("flow integration produced a non-finite value");
      if (norm <= 1.0) {
        t += h;
        y = ynew;
        k[0] = k[6];
        ++out.stats.steps;
        out.stats.error_estimate += rel;
        if (dir * (theta - t) <= 1e-15 * std::abs(theta)) break;
      } else {
        ++out.stats.rejected;
      }
      double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      h *= factor;
      if (std::abs(h) < 1e-14 * std::abs(theta)) throw IntegrationError("flow integration step size underflow");
    }
    for (std::size_t j = 0; j < n; ++j) out.point[coords_[j]] = y[j];
    return out;
  }

  FlowResult closed_form(const JetPoint& p, double theta) const {
    if (!linear_) throw Error("field " + pf_.base().name + " has no closed-form flow");
    check_theta(theta);
    const JetSpace& s = pf_.space();
    const std::size_t n = s.dimension();
    FlowResult out{p, theta, {}};
    out.stats.closed_form = true;
    Eigen::MatrixXd m = (theta * linear_->generator).exp();
    Eigen::MatrixXd phi = m.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd inv = phi.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < n; ++j) v += phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * value(p, s.independent(j));
      out.point[s.independent(i)] = v;
    }
    for (std::size_t r = 0; r < s.dependents().size(); ++r) {
      const double a = linear_->scale[r];
      const double b = linear_->shift[r];
      const double alpha = std::exp(a * theta);
      const double beta = a == 0.0 ? b * theta : b * (alpha - 1.0) / a;
      out.point[s.dependent(r)] = alpha * value(p, s.dependent(r)) + beta;
      for (int k = 1; k <= pf_.order(); ++k) {
        for (const auto& target : s.multi_indices(k)) {
          double sum = 0.0;
          std::vector<int> tuple(static_cast<std::size_t>(k), 0);
          for (;;) {
            double w = 1.0;
            for (std::size_t q = 0; q < tuple.size(); ++q) w *= inv(tuple[q], target[q]);
            if (w != 0.0) sum += w * value(p, s.jet(r, tuple));
            std::size_t q = 0;
            while (q < tuple.size() && ++tuple[q] == static_cast<int>(n)) tuple[q++] = 0;
            if (q == tuple.size()) break;
          }
          out.point[s.jet(r, target)] = alpha * sum;
        }
      }
    }
    return out;
  }

  std::vector<double> eval_velocity(const JetPoint& base, const std::vector<double>& y) const {
    JetPoint point = base;
    for (std::size_t j = 0; j < coords_.size(); ++j) point[coords_[j]] = y[j];
    NumericEvaluator ev(point, fns_);
    std::vector<double> out(coords_.size(), 0.0);
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (velocities_[j].is_zero()) continue;
      try {
        out[j] = ev(velocities_[j]);
      } catch (const DomainError& err) {
        throw IntegrationError(std::string("flow trajectory hits a singular set: ") + err.what());
      }
      if (!std::isfinite(out[j])) throw IntegrationError("flow velocity is not finite");
    }
    return out;
  }

 private:
  struct Linear {
    Eigen::MatrixXd generator;
    std::vector<double> scale;
    std::vector<double> shift;
  };

  static void check_theta(double theta) {
    if (!(std::abs(theta) <= 1.0)) throw Error("flow parameter must satisfy |theta| <= 1; compose flows for larger values");
  }

  static double value(const JetPoint& p, Atom a) {
    auto it = p.find(a);
    if (it == p.end()) throw UnboundSymbolError("jet point has no value for '" + to_string(a) + "'");
    return it->second;
  }

  void require_regular(const JetPoint& p) const {
    NumericEvaluator ev(p, fns_);
    for (const auto& v : velocities_) {
      if (v.is_constant()) continue;
      if (std::abs(ev(Expression(v.denominator()))) < 1e-6) throw IntegrationError("flow starts within 1e-6 of a singular set");
    }
  }

  void detect_linear() {
    const JetSpace& s = pf_.space();
    const VectorField& f = pf_.base();
    const std::size_t n = s.dimension();
    Linear lin;
    lin.generator = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
      Expression rest = f.xi[i];
      for (std::size_t j = 0; j < n; ++j) {
        Expression d = diff(f.xi[i], s.independent(j));
        if (!d.is_constant()) return;
        lin.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_numeric(d, {});
        rest -= d * Expression(s.independent(j));
      }
      if (!rest.is_constant()) return;
      lin.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = eval_numeric(rest, {});
    }
    for (std::size_t r = 0; r < s.dependents().size(); ++r) {
      Expression d = diff(f.eta[r], s.dependent(r));
      Expression rest = f.eta[r] - d * Expression(s.dependent(r));
      if (!d.is_constant() || !rest.is_constant()) return;
      lin.scale.push_back(eval_numeric(d, {}));
      lin.shift.push_back(eval_numeric(rest, {}));
    }
    linear_ = std::move(lin);
  }

  ProlongedField pf_;
  FunctionTable fns_;
  std::vector<Atom> coords_;
  std::vector<Expression> velocities_;
  std::optional<Linear> linear_;
};

/// Draws jet points: free coordinates and parameters uniformly from
/// [-hi,-lo] U [lo,hi], rule-bound coordinates from the triangular rules.
class Sampler {
 public:
  Sampler(const JetSpace& space, int order, const ConstraintManifold* manifold, FunctionTable fns, std::vector<Expression> watched,
          double lo = 0.1, double hi = 2.0)
      : fns_(std::move(fns)), watched_(std::move(watched)), lo_(lo), hi_(hi) {
    for (std::size_t i = 0; i < space.dimension(); ++i) free_.push_back(space.independent(i));
    for (const auto& p : space.parameters()) free_.push_back(space.parameter(p));
    JetSpace wide = order > space.max_order() ? space.with_max_order(order) : space;
    for (int k = 0; k <= order; ++k)
      for (Atom a : wide.jets_of_order(k))
        if (!manifold || !manifold->binds(a)) free_.push_back(a);
    if (manifold)
      for (const auto& r : manifold->rules()) {
        bound_.push_back(r);
        watched_.push_back(r.rhs);
      }
  }

  /// Denominators of every watched expression are at least `margin` in size.
  bool clear(const JetPoint& p, double margin = 0.1) const {
    try {
      NumericEvaluator ev(p, fns_);
      for (const auto& e : watched_) {
        if (e.denominator().is_constant()) continue;
        if (!(std::abs(ev(Expression(e.denominator()))) >= margin)) return false;
      }
    } catch (const DomainError&) {
      return false;
    }
    return true;
  }

  JetPoint draw(std::mt19937_64& rng, int attempts = 100) const {
    std::uniform_real_distribution<double> mag(lo_, hi_);
    std::bernoulli_distribution sign(0.5);
    for (int attempt = 0; attempt < attempts; ++attempt) {
      JetPoint p;
      for (Atom a : free_) p[a] = sign(rng) ? mag(rng) : -mag(rng);
      bool ok = true;
      try {
        NumericEvaluator ev(p, fns_);
        for (const auto& r : bound_) {
          if (!r.rhs.denominator().is_constant() && std::abs(ev(Expression(r.rhs.denominator()))) < 0.1) {
            ok = false;
            break;
          }
          p[r.lhs] = ev(r.rhs);
          if (!std::isfinite(p[r.lhs])) ok = false;
        }
      } catch (const DomainError&) {
        ok = false;
      }
      if (ok && clear(p)) return p;
    }
    throw SamplingError("no admissible jet point after " + std::to_string(attempts) + " attempts");
  }

 private:
  FunctionTable fns_;
  std::vector<Expression> watched_;
  std::vector<Atom> free_;
  std::vector<Rule> bound_;
  double lo_;
  double hi_;
};

struct OracleOptions {
  int trials = 20;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> thetas{-0.3, -0.1, 0.1, 0.3};
  double pass = 1e-9;
  double fail = 1e-3;
};

struct OracleVerdict {
  bool invariant = false;
  /// False when the deviation falls between the pass and fail thresholds.
  bool conclusive = false;
  double max_deviation = 0.0;
  int points = 0;
  int flows = 0;
  int closed_form_flows = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/// Values that a flow must preserve, and values that must stay zero on the
/// flowed points.
struct NumericTarget {
  std::vector<Expression> preserved;
  std::vector<Expression> zeros;
};

/// Samples points (on `manifold` when given), flows them by every theta under
/// each field, and measures deviations: |e(p') - e(p)| / (1 + |e(p)|) for
/// preserved values and |g(p')| / (1 + magnitude of g at p') for zeros.
inline OracleVerdict numeric_check(const std::vector<VectorField>& fields, const JetSpace& space, const NumericTarget& target,
                                   const ConstraintManifold* manifold, const OracleOptions& opts = {}) {
  if (opts.trials < 20) throw Error("the numeric oracle needs at least 20 trials");
  OracleVerdict out;
  out.seed = opts.seed;
  int order = 1;
  std::vector<Expression> all = target.preserved;
  all.insert(all.end(), target.zeros.begin(), target.zeros.end());
  for (const auto& e : all) order = std::max(order, jet_order(e));
  if (manifold)
    for (const auto& r : manifold->rules()) {
      order = std::max({order, r.lhs.order(), jet_order(r.rhs)});
    }
  std::vector<Expression> model_sources = all;
  if (manifold)
    for (const auto& r : manifold->rules()) model_sources.push_back(r.rhs);
  for (const auto& f : fields) {
    model_sources.insert(model_sources.end(), f.xi.begin(), f.xi.end());
    model_sources.insert(model_sources.end(), f.eta.begin(), f.eta.end());
  }
  std::mt19937_64 model_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  FunctionTable fns = random_models(model_sources, model_rng);
  std::mt19937_64 rng(opts.seed);

  for (const auto& field : fields) {
    Flow flow(prolong(field, space, order), fns);
    std::vector<Expression> watched = all;
    watched.insert(watched.end(), flow.velocities().begin(), flow.velocities().end());
    Sampler sampler(space, order, manifold, fns, watched);
    Sampler after(space, order, nullptr, fns, all);
    for (int trial = 0; trial < opts.trials; ++trial) {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 100) throw SamplingError("no jet point with admissible flowed images after 100 attempts");
        JetPoint p = sampler.draw(rng);
        std::vector<JetPoint> images;
        try {
          for (double th : opts.thetas) {
            FlowResult fr = flow(p, th);
            if (!fr.stats.accepted() || !after.clear(fr.point)) break;
            if (fr.stats.closed_form) ++out.closed_form_flows;
            images.push_back(std::move(fr.point));
          }
        } catch (const IntegrationError&) {
          images.clear();
        }
        if (images.size() != opts.thetas.size()) continue;
        NumericEvaluator at_p(p, fns);
        std::vector<double> before;
        for (const auto& e : target.preserved) before.push_back(at_p(e));
        for (const auto& q : images) {
          NumericEvaluator at_q(q, fns);
          for (std::size_t i = 0; i < before.size(); ++i)
            out.max_deviation = std::max(out.max_deviation, std::abs(at_q(target.preserved[i]) - before[i]) / (1.0 + std::abs(before[i])));
          for (const auto& g : target.zeros)
            out.max_deviation = std::max(out.max_deviation, std::abs(at_q(g)) / (1.0 + at_q.magnitude(g)));
          ++out.flows;
        }
        ++out.points;
        break;
      }
    }
  }
  out.invariant = out.max_deviation < opts.pass;
  out.conclusive = out.invariant || out.max_deviation > opts.fail;
  return out;
}

/// e(flow(p)) = e(p) at sampled points (on the manifold when given).
inline OracleVerdict numeric_invariance(const ProlongedField& pf, const Expression& e, const ConstraintManifold* manifold,
                                        const OracleOptions& opts = {}) {
  return numeric_check({pf.base()}, pf.space(), NumericTarget{{e}, {}}, manifold, opts);
}

inline OracleVerdict oracle_lie(const VectorField& field, const Expression& F, const JetSpace& space, const OracleOptions& opts = {}) {
  try {
    ConstraintManifold m = build_manifold(space, {}, {{F, "F"}});
    return numeric_check({field}, space, NumericTarget{{}, {F}}, &m, opts);
  } catch (const NonlinearLeadingError&) {
    OracleVerdict v = numeric_check({field}, space, NumericTarget{{F}, {}}, nullptr, opts);
    v.notes.push_back("equation has no rational leading solution; tested as a preserved value");
    return v;
  }
}

inline OracleVerdict oracle_conditional(const VectorField& field, const Expression& F, const ConditionSet& conditions,
                                        const JetSpace& space, const OracleOptions& opts = {}) {
  ConditionSet cs = conditions.resolved(std::max(1, jet_order(F)));
  std::vector<Expression> gs;
  for (const auto& c : cs.conditions) gs.push_back(c.generator);
  try {
    ConstraintManifold m = build_manifold(space, cs, {{F, "F"}});
    gs.push_back(F);
    return numeric_check({field}, space, NumericTarget{{}, gs}, &m, opts);
  } catch (const NonlinearLeadingError&) {
    ConstraintManifold m = build_manifold(space, cs);
    OracleVerdict v = numeric_check({field}, space, NumericTarget{{F}, gs}, &m, opts);
    v.notes.push_back("equation has no rational leading solution; tested as a preserved value");
    return v;
  }
}

inline OracleVerdict oracle_q_conditional(const VectorField& q, const Expression& F, const JetSpace& space, const OracleOptions& opts = {}) {
  const int l = std::max(1, jet_order(F));
  ConditionSet cs;
  for (const auto& c : characteristic(q, space)) cs.add(c, l - 1);
  return oracle_conditional(q, F, cs, space, opts);
}

inline OracleVerdict oracle_absolute_invariant(const std::vector<VectorField>& fields, const Expression& I, const JetSpace& space,
                                               const OracleOptions& opts = {}) {
  return numeric_check(fields, space, NumericTarget{{I}, {}}, nullptr, opts);
}

inline OracleVerdict oracle_conditional_invariant(const std::vector<VectorField>& fields, const Expression& I, const ConditionSet& conditions,
                                                  const JetSpace& space, const OracleOptions& opts = {}) {
  ConditionSet cs = conditions.resolved(std::max(1, jet_order(I)));
  int k = std::max(1, jet_order(I));
  for (const auto& c : cs.conditions) k = std::max(k, jet_order(c.generator) + c.consequence_order);
  JetSpace wide = k > space.max_order() ? space.with_max_order(k) : space;
  ConstraintManifold m = build_manifold(wide, cs);
  std::vector<Expression> gs;
  for (const auto& c : cs.conditions) gs.push_back(c.generator);
  return numeric_check(fields, wide, NumericTarget{{I}, gs}, &m, opts);
}

/// Symbolic and numeric verdicts agree, and the numeric one is conclusive.
inline bool agrees(const Verdict& v, const OracleVerdict& o) { return o.conclusive && o.invariant == v.holds; }

}  // namespace jetsym
