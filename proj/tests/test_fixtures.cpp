#include <cmath>

#include "doctest.h"
#include "specden/edge.hpp"
#include "specden/fixtures.hpp"
#include "support.hpp"

using namespace specden;
using specden::testing::error_code;

TEST_CASE("moment recurrence fixtures through the shared engine") {
  for (const std::string id : {"rr3", "rr4", "rr6", "rr8", "rr10"})
    for (const auto& r : run_fixture(id, 3, 5)) {
      CAPTURE(id);
      CAPTURE(r.target);
      CHECK(r.violations.empty());
      CHECK(r.checked > 0);
      REQUIRE(r.factor);
      CHECK(*r.factor != 0);
    }
  CHECK(run_fixture("rr6", 1, 1).size() == 2);
}

TEST_CASE("fixture engine is deterministic and reports misprints") {
  auto a = run_fixture("rr8", 2, 9), b = run_fixture("rr8", 2, 9);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].checked == b[i].checked);
  bool found = false;
  for (const auto& r : run_fixture("rr14", 1, 0)) found = found || !r.violations.empty();
  CHECK(found);
  for (const auto& r : run_fixture("rr14c", 1, 0)) CHECK(r.violations.empty());
  CHECK(error_code([] { run_fixture("rr99", 1, 0); }) == "InvalidArgument");
  CHECK(fixture_ids().size() == 14);
}

TEST_CASE("edge solutions carry pointwise residuals") {
  auto s = solve_soft_edge(2, -6, 3);
  REQUIRE(s.residuals.size() == s.grid.size());
  double worst = 0;
  size_t finite = 0;
  for (double r : s.residuals)
    if (!std::isnan(r)) {
      ++finite;
      worst = std::max(worst, r);
    }
  CHECK(finite + 6 == s.grid.size());
  CHECK(worst == doctest::Approx(s.ode_residual).epsilon(1e-12));
  auto h = solve_hard_edge(2, 0, 20);
  REQUIRE(h.residuals.size() == h.grid.size());
  CHECK(!std::isnan(h.residuals.front()));
}
