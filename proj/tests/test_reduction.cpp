#include <gtest/gtest.h>

#include "jetsym/reduction.hpp"

using namespace jetsym;

namespace {

JetSpace txy() {
  JetSpace s = declare_space({"t", "x", "y"}, {"u"}, 2, {1, -1, -1});
  s.add_function("f").add_function("g").add_function("K1").add_function("K2");
  s.add_parameter("lambda0").add_parameter("lambda1").add_parameter("lambda2");
  return s;
}

Expression P(const std::string& s, const JetSpace& sp) { return parse(s, sp); }

Ansatz radial(const JetSpace& sp) {
  return Ansatz{"r", "phi", {"t"}, {{"r", P("x^2 + y^2", sp)}}, {parse_field("x*d/dy - y*d/dx", sp, "J")}};
}

Ansatz lorentz(const JetSpace& sp) {
  return Ansatz{"rho",
                "phi",
                {},
                {{"rho", P("t^2 - x^2 - y^2", sp)}},
                {parse_field("t*d/dx + x*d/dt", sp, "J01"), parse_field("t*d/dy + y*d/dt", sp, "J02"),
                 parse_field("x*d/dy - y*d/dx", sp, "J")}};
}

}  // namespace

TEST(Ansatz, Radial) {
  auto sp = txy();
  auto a = radial(sp);
  JetSpace rs = reduced_space(sp, a);
  EXPECT_TRUE(ansatz_variables_independent(sp, a));
  EXPECT_EQ(apply_ansatz(P("u_xx + u_yy", sp), a, sp), P("4*r*phi_rr + 4*phi_r", rs));
  EXPECT_EQ(apply_ansatz(P("u_t", sp), a, sp), P("phi_t", rs));
  EXPECT_EQ(apply_ansatz(P("u_xx/x^2 - u_x/x^3", sp), a, sp), P("4*phi_rr", rs));
  EXPECT_EQ(apply_ansatz(P("u_tx/x", sp), a, sp), P("2*phi_tr", rs));
  EXPECT_THROW(apply_ansatz(P("u_xx", sp), a, sp), NotReducibleError);
}

TEST(Ansatz, LiftBackRoundTrip) {
  auto sp = txy();
  auto a = radial(sp);
  JetSpace rs = reduced_space(sp, a);
  Expression red = P("4*r*phi_rr + 4*phi_r - phi_t*phi_tr", rs);
  Expression lifted = lift_back(red, a, sp);
  EXPECT_EQ(apply_ansatz(lifted, a, sp), red);
}

TEST(Ansatz, Lorentz) {
  auto sp = txy();
  auto a = lorentz(sp);
  JetSpace rs = reduced_space(sp, a);
  Expression fts = P("u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2", sp);
  EXPECT_EQ(apply_ansatz(fts, a, sp), P("4*rho*phi_rhorho + 6*phi_rho - 4*(lambda0 + lambda1 + lambda2)*phi_rho^2", rs));
}

TEST(Translation, Reduce) {
  auto sp = txy();
  EXPECT_EQ(reduce_by_translation(P("u_t + u_x*K1(t, y, u) + u_y*K2(t, u) + u_xx + u_yy", sp), "x", sp),
            P("u_t + u_y*K2(t, u) + u_yy", sp));
  EXPECT_EQ(reduce_by_translation(P("u_tt - u_xx - u_yy - f(t, x, u)", sp), "y", sp), P("u_tt - u_xx - f(t, x, u)", sp));
  EXPECT_EQ(reduce_by_translation(P("u_t", sp), "x", sp), P("u_t", sp));
  EXPECT_THROW(reduce_by_translation(P("u_t - x", sp), "x", sp), NotReducibleError);
}

TEST(Hidden, Translation) {
  auto sp = txy();
  auto red = Reduction::by_translation("x");
  auto dy = parse_field("d/dy", sp, "d/dy");
  EXPECT_TRUE(check_hidden_symmetry(P("u_t + u_x*K1(t, y, u) + u_y*K2(t, u) + u_xx + u_yy", sp), red, dy, sp).holds);
  Expression wave = P("u_tt - K1(t, y, u)*u_xx - K1_;3(t, y, u)*u_x^2 - K2(t, u)*u_yy - K2_;2(t, u)*u_y^2", sp);
  auto v = check_hidden_symmetry(wave, red, dy, sp);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.sub[1].holds);
  EXPECT_FALSE(check_hidden_symmetry(P("u_t + u_y*K2(t, u) + u_xx + u_yy", sp), red, dy, sp).holds);
  EXPECT_THROW(project(parse_field("x*d/dy", sp), red, sp), ProjectionUndefinedError);
}

TEST(Transform, BoostAndSingular) {
  auto sp = declare_space({"t", "x"}, {"u"}, 2);
  AffineTransform boost{"boost", {"t", "x"}, {{Rational(5, 4), Rational(3, 4)}, {Rational(3, 4), Rational(5, 4)}}, {}, 1, 0};
  EXPECT_EQ(transform_equation(P("u_tt - u_xx", sp), boost, sp), P("u_tt - u_xx", sp));
  AffineTransform scale{"scale", {"t", "x"}, {{Rational(2), Rational(0)}, {Rational(0), Rational(1)}}, {}, 3, 1};
  EXPECT_EQ(transform_equation(P("u_t - u", sp), scale, sp), P("2*u_t/3 - (u - 1)/3", sp));
  AffineTransform sing{"sing", {"t", "x"}, {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}, {}, 1, 0};
  EXPECT_THROW(transform_equation(P("u_t", sp), sing, sp), NonInvertibleTransformError);
}

TEST(Pipeline, Wave) {
  auto sp = txy();
  PipelineSpec spec;
  spec.name = "wave";
  spec.members = {{"generic", P("u_tt - u_xx - u_yy - f(t, x, u)", sp)}, {"linear", P("u_tt - u_xx - u_yy", sp)}};
  spec.reductions = {Reduction::by_translation("y")};
  spec.candidates = {parse_field("d/dx", sp, "d/dx"), parse_field("(t + x)^2*d/dt + (t + x)^2*d/dx", sp, "conformal")};
  auto rep = run_pipeline(spec, sp);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_FALSE(rep.rows[0].reduced_holds);
  EXPECT_TRUE(rep.rows[2].reduced_holds);
  EXPECT_FALSE(rep.rows[2].hidden);
  EXPECT_TRUE(rep.rows[3].reduced_holds);
  EXPECT_TRUE(rep.rows[3].hidden);
}
