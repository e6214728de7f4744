#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "jetsym/oracle.hpp"

using namespace jetsym;

namespace {

JetSpace txy(int order = 2) {
  JetSpace s = declare_space({"t", "x", "y"}, {"u"}, order, {1, -1, -1});
  s.add_function("K1").add_function("K2");
  s.add_parameter("lambda0").add_parameter("lambda1").add_parameter("lambda2");
  return s;
}

Expression P(const std::string& s, const JetSpace& sp) { return parse(s, sp); }

JetPoint random_point(const Flow& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.3, 1.5);
  JetPoint p;
  for (Atom a : f.coordinates()) p[a] = d(rng);
  return p;
}

double distance(const JetPoint& a, const JetPoint& b) {
  double m = 0.0;
  for (const auto& [atom, v] : a) m = std::max(m, std::abs(v - b.at(atom)) / (1.0 + std::abs(v)));
  return m;
}

}  // namespace

TEST(Flow, TranslationAndIdentity) {
  auto sp = txy();
  Flow f(prolong(parse_field("d/dx", sp), sp, 2));
  EXPECT_TRUE(f.has_closed_form());
  std::mt19937_64 rng(1);
  JetPoint p = random_point(f, rng);
  for (double th : {-0.7, 0.25}) {
    for (const auto& r : {f.closed_form(p, th), f.integrate(p, th)}) {
      for (const auto& [a, v] : p) {
        double want = a == sp.independent(1) ? v + th : v;
        EXPECT_NEAR(r.point.at(a), want, 1e-12) << to_string(a);
      }
    }
  }
  EXPECT_EQ(distance(p, f(p, 0.0).point), 0.0);
  EXPECT_EQ(distance(p, f.integrate(p, 0.0).point), 0.0);
  EXPECT_THROW(f(p, 1.5), Error);
}

TEST(Flow, QuarterTurnByComposition) {
  auto sp = declare_space({"x", "y"}, {"u"}, 1);
  Flow f(prolong(parse_field("x*d/dy - y*d/dx", sp), sp, 1));
  JetPoint p{{sp.independent(0), 1.0}, {sp.independent(1), 0.0}, {sp.dependent(0), 0.5},
             {sp.jet(0, {0}), 1.0}, {sp.jet(0, {1}), 0.0}};
  const double h = std::numbers::pi / 4;
  for (bool rk : {false, true}) {
    auto half = rk ? f.integrate(p, h) : f.closed_form(p, h);
    auto full = rk ? f.integrate(half.point, h) : f.closed_form(half.point, h);
    EXPECT_NEAR(full.point.at(sp.independent(0)), 0.0, 1e-10);
    EXPECT_NEAR(full.point.at(sp.independent(1)), 1.0, 1e-10);
    EXPECT_NEAR(full.point.at(sp.jet(0, {0})), 0.0, 1e-10);
    EXPECT_NEAR(full.point.at(sp.jet(0, {1})), 1.0, 1e-10);
    EXPECT_NEAR(full.point.at(sp.dependent(0)), 0.5, 1e-12);
    if (rk) EXPECT_LT(full.stats.error_estimate, 1e-10);
  }
}

TEST(Flow, ClosedFormMatchesIntegration) {
  auto sp = txy(3);
  std::mt19937_64 rng(7);
  for (const char* text : {"x*d/dy - y*d/dx", "t*d/dx + x*d/dt", "t*d/dy + y*d/dt", "x*d/dx + y*d/dy + 2*u*d/du + d/dt",
                           "d/dt + 3*d/du - u*d/du"}) {
    Flow f(prolong(parse_field(text, sp), sp, 3));
    ASSERT_TRUE(f.has_closed_form()) << text;
    for (int trial = 0; trial < 3; ++trial) {
      JetPoint p = random_point(f, rng);
      for (double th : {-0.3, 0.1, 0.9}) EXPECT_LT(distance(f.closed_form(p, th).point, f.integrate(p, th).point), 1e-9) << text;
    }
  }
  EXPECT_FALSE(Flow(prolong(parse_field("x^2*d/dx + x*y*d/dy", sp), sp, 2)).has_closed_form());
  EXPECT_FALSE(Flow(prolong(parse_field("d/dx + x*d/du", sp), sp, 2)).has_closed_form());
}

TEST(Flow, GroupLaw) {
  auto sp = txy();
  std::mt19937_64 rng(11);
  for (const char* text : {"x^2*d/dx + x*y*d/dy + x*u*d/du", "t*d/dx + x*d/dt", "d/dx + x*d/du"}) {
    Flow f(prolong(parse_field(text, sp), sp, 2));
    for (int trial = 0; trial < 3; ++trial) {
      JetPoint p = random_point(f, rng);
      auto once = f(p, 0.5).point;
      auto twice = f(f(p, 0.2).point, 0.3).point;
      EXPECT_LT(distance(once, twice), 1e-9) << text;
      EXPECT_LT(distance(f(f(p, 0.4).point, -0.4).point, p), 1e-9) << text;
    }
  }
}

// The flowed 2-jet of an actual function u(x, y) equals the 2-jet of the
// rotated function u(c x + s y, -s x + c y) at the rotated base point.
TEST(Flow, ContactLift) {
  JetSpace sp = declare_space({"x", "y"}, {"u"}, 2);
  sp.add_parameter("c").add_parameter("s");
  Expression u = P("1 + x - 2*y + x^2*y/3 + x*y - y^3/5 + x^3/7", sp);
  Atom x = sp.independent(0);
  Atom y = sp.independent(1);
  Atom c = sp.parameter("c");
  Atom s = sp.parameter("s");
  Flow rot(prolong(parse_field("x*d/dy - y*d/dx", sp), sp, 2));
  auto jet_of = [&](const Expression& fn, double px, double py, const PointMap& extra) {
    PointMap at = extra;
    at[x] = px;
    at[y] = py;
    JetPoint out;
    out[x] = px;
    out[y] = py;
    out[sp.dependent(0)] = eval_numeric(fn, at);
    for (int k = 1; k <= 2; ++k)
      for (const auto& m : sp.multi_indices(k)) {
        Expression d = fn;
        for (int i : m) d = diff(d, sp.independent(static_cast<std::size_t>(i)));
        out[sp.jet(0, m)] = eval_numeric(d, at);
      }
    return out;
  };
  RuleMap rotate{{x, P("c*x + s*y", sp)}, {y, P("-s*x + c*y", sp)}};
  Expression moved = substitute_closed(u, rotate);
  for (double th : {-0.6, 0.3, 0.8}) {
    const double px = 0.7, py = -0.4;
    JetPoint p = jet_of(u, px, py, {});
    const double qx = std::cos(th) * px - std::sin(th) * py;
    const double qy = std::sin(th) * px + std::cos(th) * py;
    JetPoint want = jet_of(moved, qx, qy, {{c, std::cos(th)}, {s, std::sin(th)}});
    EXPECT_LT(distance(rot.integrate(p, th).point, want), 1e-9);
    EXPECT_LT(distance(rot.closed_form(p, th).point, want), 1e-9);
  }
}

TEST(Oracle, ModelSlots) {
  std::mt19937_64 rng(3);
  PolynomialModel m(3, rng);
  std::vector<double> a{0.4, -0.7, 1.2};
  const double h = 1e-5;
  auto bump = [&](int i, double d) {
    auto b = a;
    b[static_cast<std::size_t>(i)] += d;
    return b;
  };
  for (int i = 1; i <= 3; ++i) {
    double fd = (m({}, bump(i - 1, h)) - m({}, bump(i - 1, -h))) / (2 * h);
    EXPECT_NEAR(m({i}, a), fd, 1e-8);
    double fd2 = (m({2}, bump(i - 1, h)) - m({2}, bump(i - 1, -h))) / (2 * h);
    std::vector<int> slots{2, i};
    std::sort(slots.begin(), slots.end());
    EXPECT_NEAR(m(slots, a), fd2, 1e-8);
  }
  EXPECT_EQ(m({1, 1, 1, 1}, a), 0.0);
}

TEST(Oracle, NumericInvariance) {
  auto sp = declare_space({"x", "y"}, {"u"}, 2);
  auto J = parse_field("x*d/dy - y*d/dx", sp, "J");
  auto pf = prolong(J, sp, 1);
  auto a = numeric_invariance(pf, P("u_x^2 + u_y^2", sp), nullptr);
  EXPECT_TRUE(a.invariant && a.conclusive);
  EXPECT_LT(a.max_deviation, 1e-11);
  EXPECT_EQ(a.points, 20);
  EXPECT_EQ(a.flows, 80);
  EXPECT_EQ(a.closed_form_flows, 80);

  ConditionSet rot;
  rot.add(P("x*u_y - y*u_x", sp), 0);
  ConstraintManifold m = build_manifold(sp, rot);
  auto b = numeric_invariance(pf, P("u_x/x", sp), &m);
  EXPECT_TRUE(b.invariant && b.conclusive) << b.max_deviation;

  auto c = numeric_invariance(pf, P("u_x", sp), nullptr);
  EXPECT_FALSE(c.invariant);
  EXPECT_TRUE(c.conclusive);
  EXPECT_GT(c.max_deviation, 1e-3);

  auto d = numeric_invariance(pf, P("u_x/x", sp), nullptr);
  EXPECT_FALSE(d.invariant);
  EXPECT_TRUE(d.conclusive);

  OracleOptions few;
  few.trials = 5;
  EXPECT_THROW(numeric_invariance(pf, P("u_x", sp), nullptr, few), Error);
}

TEST(Oracle, AgreesWithSymbolicChecks) {
  auto sp = txy();
  Expression fts = P("u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2", sp);
  ConditionSet lor;
  lor.add(P("t*u_x + x*u_t", sp), -1, "c1").add(P("t*u_y + y*u_t", sp), -1, "c2").add(P("x*u_y - y*u_x", sp), -1, "c3");
  for (const char* text : {"t*d/dx + x*d/dt", "t*d/dy + y*d/dt", "x*d/dy - y*d/dx"}) {
    auto f = parse_field(text, sp, text);
    auto v = check_conditional_invariance(f, fts, lor, sp);
    auto o = oracle_conditional(f, fts, lor, sp);
    EXPECT_TRUE(v.holds);
    EXPECT_TRUE(agrees(v, o)) << text << " " << o.max_deviation;
    auto lie = check_lie_invariance(f, fts, sp);
    EXPECT_TRUE(agrees(lie, oracle_lie(f, fts, sp))) << text;
  }

  Expression hidden = P("u_t + K1(t, y, u)*u_x^2 + u_yy + K2(t, u)*u_y", sp);
  for (const char* text : {"d/dx", "d/dy", "d/dt"}) {
    auto f = parse_field(text, sp, text);
    auto v = check_lie_invariance(f, hidden, sp);
    auto o = oracle_lie(f, hidden, sp);
    EXPECT_TRUE(agrees(v, o)) << text << " " << o.max_deviation;
  }

  Expression heat = P("u_t - u_xx", sp);
  auto q = parse_field("d/dy", sp);
  EXPECT_TRUE(agrees(check_q_conditional(q, heat, sp), oracle_q_conditional(q, heat, sp)));
  auto q2 = parse_field("x*d/dt + d/dx", sp);
  auto qv = check_q_conditional(q2, heat, sp);
  EXPECT_TRUE(agrees(qv, oracle_q_conditional(q2, heat, sp))) << qv.holds;
}

TEST(Oracle, ConditionalInvariants) {
  auto sp = txy();
  ConditionSet lor;
  lor.add(P("t*u_x + x*u_t", sp)).add(P("t*u_y + y*u_t", sp)).add(P("x*u_y - y*u_x", sp));
  std::vector<VectorField> fs{parse_field("t*d/dx + x*d/dt", sp, "J01"), parse_field("t*d/dy + y*d/dt", sp, "J02"),
                              parse_field("x*d/dy - y*d/dx", sp, "J")};
  for (const char* text : {"u_xx/x^2 - u_x/x^3", "u_xx/x^2 + u_x/x^3", "u_t/t", "u_x"}) {
    Expression I = P(text, sp);
    auto v = check_conditional_differential_invariant(fs, I, lor, sp);
    auto o = oracle_conditional_invariant(fs, I, lor, sp);
    EXPECT_TRUE(agrees(v, o)) << text << " " << v.holds << " " << o.max_deviation;
  }
}
