#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "aadp/lp.hpp"
#include "aadp/rng.hpp"
#include "oracles.hpp"

using namespace aadp;
using namespace aadp::lp;

namespace {

// Random LP in the shape the enumeration oracle understands:
// max/min c'x s.t. A x <= b, x >= 0, with a bounding row so the region is a
// polytope and an interior point guaranteeing feasibility.
DenseLp random_bounded_lp(std::size_t m, std::size_t n, std::uint64_t seed,
                          bool maximize) {
  Rng rng(seed);
  DenseLp lp = DenseLp::make(maximize ? Sense::Max : Sense::Min, m + 1, n);
  std::vector<double> x0(n);
  for (auto& v : x0) v = rng.uniform();
  for (std::size_t i = 0; i < m; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lp.a(i, j) = 2.0 * rng.uniform() - 1.0;
      ax += lp.a(i, j) * x0[j];
    }
    lp.rhs[i] = ax + 0.1 + rng.uniform();
  }
  for (std::size_t j = 0; j < n; ++j) lp.a(m, j) = 1.0;
  lp.rhs[m] = 2.0 * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) lp.objective[j] = 2.0 * rng.uniform() - 1.0;
  return lp;
}

std::optional<double> oracle_value(const DenseLp& lp) {
  return oracles::enumerate_basic_solutions(lp.a, lp.rhs, lp.objective,
                                            lp.sense == Sense::Max);
}

}  // namespace

TEST_CASE("one-dimensional LP with binding row") {
  DenseLp lp = DenseLp::make(Sense::Max, 1, 1);
  lp.objective = {1.0};
  lp.a(0, 0) = 1.0;
  lp.rhs = {3.0};
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("contradictory constraints are infeasible") {
  DenseLp lp = DenseLp::make(Sense::Min, 1, 1);
  lp.objective = {0.0};
  lp.a(0, 0) = 1.0;
  lp.row_sense = {RowSense::EQ};
  lp.rhs = {1.0};
  lp.lower = {2.0};
  auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded ray is detected") {
  DenseLp lp = DenseLp::make(Sense::Max, 1, 2);
  lp.objective = {1.0, 0.0};
  lp.a(0, 1) = 1.0;  // x1 <= 1, x0 unconstrained above
  lp.rhs = {1.0};
  auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("no-row LP optimizes over the box") {
  DenseLp lp = DenseLp::make(Sense::Max, 0, 2);
  lp.objective = {1.0, -1.0};
  lp.upper = {3.0, 5.0};
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("free variables with equality and inequality rows") {
  DenseLp lp = DenseLp::make(Sense::Min, 2, 2);
  lp.objective = {2.0, 1.0};
  lp.a(0, 0) = 1.0;
  lp.a(0, 1) = 1.0;
  lp.row_sense[0] = RowSense::EQ;
  lp.rhs[0] = 3.0;
  lp.a(1, 0) = 1.0;
  lp.a(1, 1) = -1.0;
  lp.row_sense[1] = RowSense::GE;
  lp.rhs[1] = 1.0;
  lp.lower = {-kInf, -kInf};
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(5.0));
  CHECK(sol.duals[0] == doctest::Approx(1.5));
  CHECK(sol.duals[1] == doctest::Approx(0.5));
  CHECK(sol.duals[1] >= 0.0);  // dual of a >= row in a min problem
}

TEST_CASE("Beale's degenerate cycling example terminates at the optimum") {
  // min -3/4 x0 + 150 x1 - 1/50 x2 + 6 x3 with the classic degenerate rows.
  DenseLp lp = DenseLp::make(Sense::Min, 3, 4);
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  const double a0[] = {0.25, -60.0, -0.04, 9.0};
  const double a1[] = {0.5, -90.0, -0.02, 3.0};
  for (std::size_t j = 0; j < 4; ++j) {
    lp.a(0, j) = a0[j];
    lp.a(1, j) = a1[j];
  }
  lp.a(2, 2) = 1.0;
  lp.rhs = {0.0, 0.0, 1.0};
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  auto expected = oracle_value(lp);
  REQUIRE(expected.has_value());
  CHECK(sol.objective == doctest::Approx(*expected).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("Marshall-Suurballe cycling example terminates") {
  DenseLp lp = DenseLp::make(Sense::Min, 2, 4);
  lp.objective = {-2.3, -2.15, 13.55, 0.4};
  const double a0[] = {0.4, 0.2, -1.4, -0.2};
  const double a1[] = {-7.8, -1.4, 7.8, 0.4};
  for (std::size_t j = 0; j < 4; ++j) {
    lp.a(0, j) = a0[j];
    lp.a(1, j) = a1[j];
  }
  lp.rhs = {0.0, 0.0};
  auto sol = solve(lp);
  // The feasible set is a cone, so the optimum is either 0 or unbounded;
  // the point of the instance is termination.
  REQUIRE((sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Unbounded));
  if (sol.status == SolveStatus::Optimal)
    CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("random bounded LPs match basic-solution enumeration") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const std::size_t m = 2 + s % 4, n = 2 + (s * 7) % 5;
    DenseLp lp = random_bounded_lp(m, n, 1000 + s, s % 2 == 0);
    auto sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    auto expected = oracle_value(lp);
    REQUIRE(expected.has_value());
    CHECK(sol.objective == doctest::Approx(*expected).epsilon(1e-8));
    auto res = residuals(lp, sol);
    CHECK(res.primal <= 1e-7);
    CHECK(res.dual <= 1e-7);
    CHECK(res.complementarity <= 1e-7);
    CHECK(res.gap <= 1e-7);
  }
}

TEST_CASE("an 8x12 instance agrees with enumeration") {
  DenseLp lp = random_bounded_lp(7, 12, 42, true);
  auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  auto expected = oracle_value(lp);
  REQUIRE(expected.has_value());
  CHECK(sol.objective == doctest::Approx(*expected).epsilon(1e-8));
}

TEST_CASE("solver is deterministic") {
  DenseLp lp = random_bounded_lp(5, 6, 7, true);
  auto s1 = solve(lp);
  auto s2 = solve(lp);
  REQUIRE(s1.status == SolveStatus::Optimal);
  CHECK(s1.objective == s2.objective);
  CHECK(s1.iterations == s2.iterations);
  CHECK(s1.x == s2.x);
  CHECK(s1.duals == s2.duals);
}

TEST_CASE("lp text dump is line-exact") {
  DenseLp lp = DenseLp::make(Sense::Max, 2, 2);
  lp.objective = {1.0, -2.5};
  lp.a(0, 0) = 1.0;
  lp.a(0, 1) = 2.0;
  lp.rhs[0] = 4.0;
  lp.a(1, 0) = -1.0;
  lp.a(1, 1) = 1.0;
  lp.row_sense[1] = RowSense::GE;
  lp.rhs[1] = -1.0;
  lp.lower[1] = -kInf;
  lp.upper[0] = 3.0;
  const std::string expected =
      "Maximize\n"
      " obj: + 1 x0 - 2.5 x1\n"
      "Subject To\n"
      " c0: + 1 x0 + 2 x1 <= 4\n"
      " c1: - 1 x0 + 1 x1 >= -1\n"
      "Bounds\n"
      " 0 <= x0 <= 3\n"
      " x1 free\n"
      "End\n";
  CHECK(to_lp_format(lp) == expected);
}

TEST_CASE("validate rejects malformed problems") {
  DenseLp lp = DenseLp::make(Sense::Min, 1, 2);
  lp.lower[0] = 2.0;
  lp.upper[0] = 1.0;
  CHECK_THROWS_AS(lp.validate(), std::invalid_argument);
  DenseLp lp2 = DenseLp::make(Sense::Min, 1, 1);
  lp2.rhs[0] = kInf;
  CHECK_THROWS_AS(lp2.validate(), std::invalid_argument);
}
