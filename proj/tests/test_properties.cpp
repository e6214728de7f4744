#include <gtest/gtest.h>

#include "jetsym/properties.hpp"

using namespace jetsym;

namespace {

void expect_pass(const PropertyResult& r) {
  EXPECT_TRUE(r.passed()) << r.name << ": " << r.failures << " of " << r.cases << " cases failed; first: " << r.first_failure;
}

}  // namespace

TEST(Properties, Confluence) { expect_pass(check_confluence(1000)); }
TEST(Properties, TotalDerivatives) { expect_pass(check_total_derivatives()); }
TEST(Properties, ReduceIdempotent) { expect_pass(check_reduce_idempotent(500)); }
TEST(Properties, ProlongationRecursion) { expect_pass(check_prolongation_recursion()); }
TEST(Properties, Commutators) { expect_pass(check_commutators()); }
TEST(Properties, FlowGroupLaw) { expect_pass(check_flow_group_law()); }

TEST(Properties, GeneratorIsDeterministic) {
  JetSpace s = property_space();
  ExpressionGenerator a(s, 7), b(s, 7);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(a(), b());
}
