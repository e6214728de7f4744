// Runs the ten acceptance criteria; one PASS/FAIL line each, exit 1 on any failure.

#include <cstdio>
#include <exception>

#include "jetsym/suite.hpp"

int main() {
  using namespace jetsym;
  bool all = true;
  AcceptanceSuite suite;
  for (auto criterion : {&AcceptanceSuite::absolute_rotation, &AcceptanceSuite::conditional_rotation, &AcceptanceSuite::lorentz,
                          &AcceptanceSuite::fts, &AcceptanceSuite::hidden, &AcceptanceSuite::reduction_identities,
                          &AcceptanceSuite::equivalence, &AcceptanceSuite::invariant_count, &AcceptanceSuite::agreement,
                          &AcceptanceSuite::kernel}) {
    CriterionResult c;
    try {
      c = (suite.*criterion)();
    } catch (const std::exception& e) {
      c.title = "error";
      c.detail.push_back(e.what());
    }
    all = all && c.passed;
    std::printf("%s\n", format_criterion(c).c_str());
    for (const auto& d : c.detail) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
