#include <gtest/gtest.h>

#include "jetsym/checks.hpp"

using namespace jetsym;

namespace {

JetSpace txy() {
  JetSpace s = declare_space({"t", "x", "y"}, {"u"}, 2, {1, -1, -1});
  s.add_function("f").add_function("K1").add_function("K2");
  s.add_parameter("lambda0").add_parameter("lambda1").add_parameter("lambda2");
  return s;
}

Expression P(const std::string& s, const JetSpace& sp) { return parse(s, sp); }

ConditionSet rotation_cond(const JetSpace& sp, int order = -1) {
  ConditionSet c;
  c.add(P("x*u_y - y*u_x", sp), order, "rot");
  return c;
}

ConditionSet lorentz_cond(const JetSpace& sp) {
  ConditionSet c;
  c.add(P("t*u_x + x*u_t", sp), -1, "c1").add(P("t*u_y + y*u_t", sp), -1, "c2").add(P("x*u_y - y*u_x", sp), -1, "c3");
  return c;
}

}  // namespace

TEST(VectorField, ProlongRotation) {
  auto sp = txy();
  auto J = parse_field("x*d/dy - y*d/dx", sp, "J");
  auto pf = prolong(J, sp, 2);
  EXPECT_EQ(pf.coefficient(make_jet("u", {"x"})), P("-u_y", sp));
  EXPECT_EQ(pf.coefficient(make_jet("u", {"y"})), P("u_x", sp));
  EXPECT_EQ(pf.coefficient(make_jet("u", {"x", "x"})), P("-2*u_xy", sp));
  EXPECT_EQ(pf.coefficient(make_jet("u", {"y", "y"})), P("2*u_xy", sp));
  EXPECT_EQ(pf.coefficient(make_jet("u", {"x", "y"})), P("u_xx - u_yy", sp));
  EXPECT_TRUE(pf.recheck());
  EXPECT_TRUE(pf.apply(P("u_x^2 + u_y^2", sp)).is_zero());
  EXPECT_TRUE(pf.apply(P("u_xx + u_yy", sp)).is_zero());
  EXPECT_EQ(pf.apply(P("u_x/x", sp)), P("y*u_x/x^2 - u_y/x", sp));
}

TEST(VectorField, Characteristic) {
  auto sp = txy();
  EXPECT_EQ(characteristic(parse_field("x*d/dy - y*d/dx", sp), sp)[0], P("y*u_x - x*u_y", sp));
  EXPECT_EQ(characteristic(parse_field("d/dx", sp), sp)[0], P("-u_x", sp));
  EXPECT_EQ(characteristic(parse_field("d/dt + d/dx", sp), sp)[0], P("-u_t - u_x", sp));
  auto pf = prolong(parse_field("d/dx", sp), sp, 2);
  for (const auto& [a, c] : pf.coefficients()) EXPECT_TRUE(c.is_zero());
}

TEST(VectorField, Commutator) {
  auto sp = txy();
  auto j01 = parse_field("t*d/dx + x*d/dt", sp);
  auto j02 = parse_field("t*d/dy + y*d/dt", sp);
  auto c = commutator(j01, j02, sp);
  EXPECT_TRUE(same_field(c, parse_field("x*d/dy - y*d/dx", sp)));
}

TEST(Manifold, Translation) {
  auto sp = txy();
  ConditionSet cs;
  cs.add(P("-u_x", sp), 1);
  auto m = build_manifold(sp, cs);
  EXPECT_EQ(m.rules().size(), 4u);
  for (const char* j : {"u_x", "u_tx", "u_xx", "u_xy"}) EXPECT_TRUE(m.binds(*P(j, sp).numerator().atoms().begin())) << j;
}

TEST(Manifold, Rotation) {
  auto sp = txy();
  auto m = build_manifold(sp, rotation_cond(sp, 1));
  EXPECT_EQ(m.rule_map().at(make_jet("u", {"y"})), P("y*u_x/x", sp));
  EXPECT_EQ(m.rule_map().at(make_jet("u", {"t", "y"})), P("y*u_tx/x", sp));
  EXPECT_EQ(m.rule_map().at(make_jet("u", {"x", "y"})), P("(y*u_xx - y*u_x/x)/x", sp));
  EXPECT_TRUE(m.is_zero_on(P("y*u_x/x^2 - u_y/x", sp)));
  EXPECT_TRUE(m.is_zero_on(P("u_x/x - u_y/y", sp)));
  EXPECT_FALSE(m.is_zero_on(P("u_x", sp)));
  EXPECT_EQ(m.domain_notes(), std::vector<std::string>{"x != 0"});
}

TEST(Manifold, LorentzDependency) {
  auto sp = txy();
  ConditionSet cs;
  cs.add(P("t*u_x + x*u_t", sp), 0).add(P("t*u_y + y*u_t", sp), 0).add(P("x*u_y - y*u_x", sp), 0);
  auto m = build_manifold(sp, cs);
  EXPECT_EQ(m.rules().size(), 2u);
  EXPECT_EQ(m.dependent_equations().size(), 1u);
  EXPECT_EQ(m.rule_map().at(make_jet("u", {"x"})), P("-x*u_t/t", sp));
}

TEST(Checks, Lie) {
  auto sp = txy();
  EXPECT_TRUE(check_lie_invariance(parse_field("d/dy", sp), P("u_tt - u_xx - f(t, x, u)", sp), sp).holds);
  Expression F = P("u_t + u_x*K1(t, y, u) + u_y*K2(t, u) + u_xx + u_yy", sp);
  EXPECT_TRUE(check_lie_invariance(parse_field("d/dx", sp), F, sp).holds);
  auto v = check_lie_invariance(parse_field("d/dy", sp), F, sp);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.residual(), P("u_x*K1_;2(t, y, u)", sp));
}

TEST(Checks, QConditional) {
  auto sp = txy();
  auto J = parse_field("x*d/dy - y*d/dx", sp, "J");
  auto v = check_q_conditional(J, P("u_x - 1", sp), sp);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.residual(), P("-y/x", sp));
  EXPECT_TRUE(check_q_conditional(J, P("u_t", sp), sp).holds);
  Expression fts = P("u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2", sp);
  EXPECT_TRUE(check_q_conditional(J, fts, sp).holds);
}

TEST(Checks, Conditional) {
  auto sp = txy();
  Expression fts = P("u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2", sp);
  for (const char* op : {"t*d/dx + x*d/dt", "t*d/dy + y*d/dt"}) {
    auto v = check_conditional_invariance(parse_field(op, sp), fts, lorentz_cond(sp), sp);
    EXPECT_TRUE(v.holds) << op << " " << to_string(v.residual());
    EXPECT_TRUE(v.proper) << op;
  }
  ConditionSet ux;
  ux.add(P("u_x", sp));
  Expression F = P("u_t + u_x*K1(t, y, u) + u_y*K2(t, u) + u_xx + u_yy", sp);
  auto v = check_conditional_invariance(parse_field("d/dy", sp), F, ux, sp);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.proper);
  auto w = check_conditional_invariance(parse_field("d/dx", sp), P("u_t", sp), ux, sp);
  EXPECT_TRUE(w.holds);
  EXPECT_FALSE(w.proper);
}

TEST(Checks, Invariants) {
  auto sp = txy();
  auto J = parse_field("x*d/dy - y*d/dx", sp, "J");
  auto j01 = parse_field("t*d/dx + x*d/dt", sp, "J01");
  auto j02 = parse_field("t*d/dy + y*d/dt", sp, "J02");
  EXPECT_TRUE(check_absolute_invariant({J}, P("x*u_x + y*u_y", sp), sp).holds);
  EXPECT_TRUE(check_absolute_invariant({j01, j02, J}, contract(sp, "u_a*u_ab*u_b"), sp).holds);
  auto v = check_absolute_invariant({J}, P("u_x", sp), sp);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.residual(), P("-u_y", sp));
  auto c = check_conditional_differential_invariant({J}, P("u_x/x", sp), rotation_cond(sp), sp);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.residuals[0].raw, P("y*u_x/x^2 - u_y/x", sp));
  EXPECT_EQ(c.domain_notes, std::vector<std::string>{"x != 0"});
  EXPECT_TRUE(check_conditional_differential_invariant({J}, P("u_tx/x", sp), rotation_cond(sp), sp).holds);
  EXPECT_TRUE(check_conditional_differential_invariant({J}, P("u_xx/x^2 - u_x/x^3", sp), rotation_cond(sp), sp).holds);
  EXPECT_TRUE(check_conditional_differential_invariant({j01, j02, J}, P("u_xx/x^2 - u_x/x^3", sp), lorentz_cond(sp), sp).holds);
  EXPECT_FALSE(check_conditional_differential_invariant({j01, j02, J}, P("u_xx/x^2 + u_x/x^3", sp), lorentz_cond(sp), sp).holds);
}
