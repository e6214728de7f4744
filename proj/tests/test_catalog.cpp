#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "jetsym/catalog.hpp"
#include "jetsym/commands.hpp"

using namespace jetsym;

namespace {

Outcome run_one(Session& s, const std::string& text) {
  std::size_t before = s.commands().size();
  s.load(text);
  EXPECT_EQ(s.commands().size(), before + 1);
  return execute(s, s.commands().back());
}

}  // namespace

TEST(Catalog, LoadsOperators) {
  auto J = load("rotation.J");
  EXPECT_TRUE(same_field(J.op(), parse_field("x*d/dy - y*d/dx", J.session.space())));
  auto j01 = load("lorentz.J01");
  EXPECT_TRUE(same_field(j01.op(), parse_field("t*d/dx + x*d/dt", j01.session.space())));
  auto fts = load("fts.equation");
  EXPECT_EQ(to_string(fts.expression()), to_string(parse("u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2",
                                                         fts.session.space())));
  EXPECT_THROW(load("rotation.K"), UnknownEntryError);
}

TEST(Catalog, Completeness) {
  std::set<std::string> displayed;
  for (const auto& e : catalog())
    if (!e.constructed) displayed.insert(e.id);
  std::set<std::string> expected{"translation.dx", "translation.dy", "rotation.J",           "lorentz.J01",          "lorentz.J02",
                                 "rotation.cond",  "lorentz.cond",   "rotation.DI",          "rotation.CDI",         "lorentz.DI",
                                 "lorentz.CDI",    "translation.q",  "ansatz.r",             "ansatz.rho",           "hidden-translation.1",
                                 "hidden-translation.2", "nl-wave.class", "fts.equation", "pipeline.nl-wave"};
  EXPECT_EQ(displayed, expected);
  for (const auto& e : catalog()) {
    EXPECT_FALSE(e.anchor.empty()) << e.id;
    EXPECT_NO_THROW(load(e.id)) << e.id;
  }
  EXPECT_EQ(load("rotation.DI").items().size(), 12u);
  EXPECT_EQ(load("rotation.CDI").items().size(), 7u);
  EXPECT_EQ(load("lorentz.DI").items().size(), 10u);
  EXPECT_EQ(load("lorentz.CDI").items().size(), 9u);
  EXPECT_EQ(load("translation.q").items().size(), 4u);
  EXPECT_EQ(load("lorentz.cond").conditions().conditions.size(), 3u);
}

TEST(Catalog, Checksums) {
  std::ifstream in(std::string(JETSYM_TEST_DATA) + "/catalog.fnv");
  ASSERT_TRUE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), catalog_checksums());
}

TEST(Session, Declarations) {
  Session s;
  s.load(
      "space t, x, y -> u order 2 metric 1, -1, -1;  # header\n"
      "func K;\n"
      "op J = x*d/dy - y*d/dx;\n"
      "cond rot: x*u_y = y*u_x upto 1;\n"
      "expr F = u_t = u_xx + u_yy + K(u);\n"
      "invariants I = u_x^2 + u_y^2, contract x_a*x_a;\n"
      "transform sc: t -> 2*t + 1, u -> 3*u;\n");
  EXPECT_EQ(s.expression("F"), parse("u_t - u_xx - u_yy - K(u)", s.space()));
  auto items = s.targets("I");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[1].second, parse("t^2 - x^2 - y^2", s.space()));
  auto cs = s.conditions({"rot"});
  EXPECT_EQ(cs.conditions[0].consequence_order, 1);
  auto T = s.transform("sc");
  EXPECT_EQ(T.A[0][0], Rational(2));
  EXPECT_EQ(T.shift[0], Rational(1));
  EXPECT_EQ(T.alpha, Rational(3));
  EXPECT_TRUE(same_field(s.op("J"), s.op("x*d/dy - y*d/dx")));
}

TEST(Session, ErrorsNameTheSpan) {
  Session s;
  try {
    s.load("space t, x -> u;\nexpr F = u_t + v_x;\n", "f.jsym");
    FAIL();
  } catch (const DslError& e) {
    std::string w = e.what();
    EXPECT_NE(w.find("f.jsym:2:16"), std::string::npos) << w;
    EXPECT_NE(w.find("undeclared symbol 'v_x'"), std::string::npos) << w;
  }
  EXPECT_THROW(s.load("op J = x*d/dy;"), DslError);
  Session t;
  t.load("space t, x -> u;");
  EXPECT_THROW(t.load("frobnicate;"), DslError);
  EXPECT_THROW(t.load("expr A = u; expr A = u_t;"), DslError);
  EXPECT_THROW(t.load("check lie d/dx F;"), DslError);
}

TEST(Session, Commands) {
  Session s = catalog_session();
  auto a = run_one(s, "check inv @catalog/rotation.J on u_x^2 + u_y^2;");
  EXPECT_TRUE(a.ok);
  auto b = run_one(s, "check inv J on u_x;");
  EXPECT_FALSE(b.ok);
  EXPECT_EQ(b.lines[1], "  residual J: -u_y");
  auto c = run_one(s, "hidden @catalog/hidden-translation.1 by d/dx candidate d/dy;");
  EXPECT_TRUE(c.ok);
  auto d = run_one(s, "check cdi @catalog/translation.dy on @catalog/translation.q given ux;");
  EXPECT_TRUE(d.ok);
  EXPECT_EQ(d.json["results"].size(), 4u);
  auto e = run_one(s, "reduce u_xx + u_yy by @catalog/ansatz.r;");
  EXPECT_TRUE(e.ok);
  EXPECT_EQ(e.json["reduced"], "4*r*phi_rr + 4*phi_r");
  auto f = run_one(s, "check cond @catalog/lorentz.J01, @catalog/lorentz.J02, J on @catalog/fts.equation given @catalog/lorentz.cond;");
  EXPECT_TRUE(f.ok);
  auto g = run_one(s, "oracle inv J on @catalog/rotation.DI;");
  EXPECT_TRUE(g.ok);
  for (const auto& r : g.json["results"]) EXPECT_TRUE(r["agrees"].get<bool>());
  auto h = run_one(s, "run @catalog/pipeline.nl-wave;");
  EXPECT_FALSE(h.ok);  // the y-dependent member cannot be reduced by d/dy
  auto p = run_one(s, "prolong J order 1;");
  EXPECT_EQ(p.json["coefficients"]["u_x"], "-u_y");
}
