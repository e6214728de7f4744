#include <gtest/gtest.h>

#include "jetsym/jet_space.hpp"
#include "jetsym/operations.hpp"
#include "jetsym/parser.hpp"
#include "jetsym/printer.hpp"

using namespace jetsym;

namespace {

JetSpace txy(int order = 2) { return declare_space({"t", "x", "y"}, {"u"}, order, {1, -1, -1}); }

Expression P(const std::string& s, const JetSpace& sp) { return parse(s, sp); }

}  // namespace

TEST(Expression, CanonicalZero) {
  auto sp = txy();
  EXPECT_TRUE(P("(x*u_y - y*u_x) - (x*u_y - y*u_x)", sp).is_zero());
  EXPECT_TRUE(P("(x^2 - y^2)/(x - y) - x - y", sp).is_zero());
}

TEST(Expression, GcdCancels) {
  auto sp = txy();
  Expression e = P("(x^2*u_x - y^2*u_x)/(x*u_x + y*u_x)", sp);
  EXPECT_EQ(e, P("x - y", sp));
  EXPECT_EQ(to_string(e), "x - y");
}

TEST(Expression, Printing) {
  auto sp = txy();
  EXPECT_EQ(to_string(P("u_x^2 + u_y^2", sp)), "u_x^2 + u_y^2");
  EXPECT_EQ(to_string(P("t^2 - x^2 - y^2", sp)), "t^2 - x^2 - y^2");
  EXPECT_EQ(to_string(P("-u_x/x^2", sp)), "-u_x/x^2");
  EXPECT_EQ(to_string(P("u_yx", sp)), "u_xy");
}

TEST(Expression, Diff) {
  auto sp = txy();
  EXPECT_EQ(diff(P("u_x/x", sp), make_independent("x")), P("-u_x/x^2", sp));
}

TEST(Expression, TotalDerivative) {
  auto sp = txy();
  EXPECT_EQ(total_derivative(sp, P("x*u_y - y*u_x", sp), 1), P("u_y + x*u_xy - y*u_xx", sp));
  EXPECT_THROW(total_derivative(sp, P("u_xx", sp), 1), OrderOverflowError);
}

TEST(Expression, Eval) {
  auto sp = txy();
  PointMap p{{make_jet("u", {"x"}), 3.0}, {make_jet("u", {"y"}), 4.0}};
  EXPECT_DOUBLE_EQ(eval_numeric(P("u_x^2 + u_y^2", sp), p), 25.0);
  PointMap q{{make_independent("t"), 3.0}, {make_independent("x"), 1.0}, {make_independent("y"), 2.0}};
  EXPECT_DOUBLE_EQ(eval_numeric(P("x^2 + y^2", sp), q), 5.0);
  EXPECT_DOUBLE_EQ(eval_numeric(P("t^2 - x^2 - y^2", sp), q), 4.0);
}

TEST(Expression, Contract) {
  auto sp = txy();
  EXPECT_EQ(contract(sp, "x_a*x_a"), P("t^2 - x^2 - y^2", sp));
  EXPECT_EQ(contract(sp, "x_a*u_a"), P("t*u_t + x*u_x + y*u_y", sp));
  EXPECT_EQ(contract(sp, "u_a*u_a"), P("u_t^2 - u_x^2 - u_y^2", sp));
}

TEST(Expression, Functions) {
  auto sp = txy();
  sp.add_function("f");
  Expression e = P("f(t, x, y, u)", sp);
  EXPECT_EQ(to_string(diff(e, make_jet("u"))), "f_;4(t, x, y, u)");
  Expression r = P("f_;2,3(t, x, y, u)", sp);
  EXPECT_EQ(to_string(r), "f_;2,3(t, x, y, u)");
  EXPECT_EQ(P(to_string(r), sp), r);
}

TEST(Expression, ParseErrors) {
  auto sp = txy();
  EXPECT_THROW(P("u_x +", sp), ParseError);
  EXPECT_THROW(P("v_x", sp), UndeclaredSymbolError);
  EXPECT_THROW(P("u_xxx", sp), ParseError);
  try {
    P("x + * y", sp);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Expression, Substitute) {
  auto sp = txy();
  Expression e = substitute(P("u_x/x + u_y", sp), {{make_jet("u", {"x"}), P("x*u_y", sp)}});
  EXPECT_EQ(e, P("2*u_y", sp));
  EXPECT_THROW(substitute(P("u_x", sp), {{make_jet("u", {"x"}), P("u_y", sp)}, {make_jet("u", {"y"}), P("u_x", sp)}}),
               CyclicRulesError);
}
