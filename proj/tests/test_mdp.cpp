#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aadp/diagnostics.hpp"
#include "aadp/features.hpp"
#include "aadp/lp.hpp"
#include "aadp/mdp.hpp"
#include "aadp/rng.hpp"

using namespace aadp;
using namespace aadp::mdp;

namespace {

SampledMdp single_state_mdp(double gamma) {
  SampledMdp m;
  m.states = {{0.0}};
  m.actions = {"a0"};
  Matrix t(1, 1);
  t(0, 0) = 1.0;
  m.transition = {make_stochastic_csr(t)};
  m.reward = Matrix(1, 1, 1.0);
  m.cost = Matrix(1, 1, 0.0);
  m.discount = gamma;
  m.initial = {1.0};
  return m;
}

// Deterministic two-state chain: action 0 stays, action 1 switches.
SampledMdp two_state_switch(double gamma) {
  SampledMdp m;
  m.states = {{0.0}, {1.0}};
  m.actions = {"stay", "switch"};
  Matrix stay(2, 2), sw(2, 2);
  stay(0, 0) = 1.0;
  stay(1, 1) = 1.0;
  sw(0, 1) = 1.0;
  sw(1, 0) = 1.0;
  m.transition = {make_stochastic_csr(stay), make_stochastic_csr(sw)};
  m.reward = Matrix(2, 2);
  m.reward(0, 0) = 0.2;   // linger in the poor state
  m.reward(0, 1) = 0.0;   // move to the good state
  m.reward(1, 0) = 1.0;   // stay in the good state
  m.reward(1, 1) = -0.5;
  m.cost = Matrix(2, 2);
  m.discount = gamma;
  m.initial = {1.0, 0.0};
  return m;
}

}  // namespace

TEST_CASE("single state geometric mass") {
  SampledMdp m = single_state_mdp(0.5);
  auto lp_prob = build_exact_lp(m);
  auto sol = lp::solve(lp_prob);
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  // sum_t gamma^t = 2
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("two-state chain matches value iteration") {
  SampledMdp m = two_state_switch(0.9);
  auto sol = lp::solve(build_exact_lp(m));
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  const double vi = diagnostics::value_iteration_value(m);
  CHECK(sol.objective == doctest::Approx(vi).epsilon(1e-6));
}

TEST_CASE("zero reward gives zero objective") {
  SampledMdp m = two_state_switch(0.9);
  m.reward = Matrix(2, 2, 0.0);
  auto sol = lp::solve(build_exact_lp(m));
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("exact LP optimum matches exhaustive policy enumeration") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    diagnostics::RandomMdpSpec spec;
    spec.num_states = 3 + s % 4;
    spec.num_actions = 2 + s % 2;
    spec.gamma = s % 2 ? 0.9 : 0.5;
    auto m = diagnostics::random_mdp(spec, 100 + s);
    auto sol = lp::solve(build_exact_lp(m));
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    const double best = diagnostics::enumerate_policies_value(m);
    CHECK(sol.objective == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("identity indicator basis reproduces the exact LP") {
  diagnostics::RandomMdpSpec spec;
  spec.num_states = 4;
  spec.num_actions = 2;
  auto m = diagnostics::random_mdp(spec, 7);
  auto exact = lp::solve(build_exact_lp(m));
  auto fs = features::FeatureSet::indicator(4, 2);
  auto reduced = lp::solve(build_reduced_primal_lp(m, fs));
  REQUIRE(exact.status == lp::SolveStatus::Optimal);
  REQUIRE(reduced.status == lp::SolveStatus::Optimal);
  CHECK(reduced.objective == doctest::Approx(exact.objective).epsilon(1e-9));
}

TEST_CASE("constant single basis column is feasible only in special cases") {
  auto m = single_state_mdp(0.5);
  features::FeatureSet fs;
  fs.phi = {Matrix(1, 1, 1.0)};
  fs.psi = Matrix(1, 1, 1.0);
  auto sol = lp::solve(build_reduced_primal_lp(m, fs));
  // one state, one action: theta * (1 - gamma) = 1 is solvable
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-9));

  // two states with asymmetric initial mass: a uniform measure cannot
  // balance the flow, so the rank-1 reduction is infeasible
  auto m2 = two_state_switch(0.9);
  features::FeatureSet fs2;
  fs2.phi = {Matrix(2, 1, 1.0), Matrix(2, 1, 1.0)};
  fs2.psi = Matrix(2, 1, 1.0);
  auto sol2 = lp::solve(build_reduced_primal_lp(m2, fs2));
  CHECK(sol2.status == lp::SolveStatus::Infeasible);
}

TEST_CASE("reduced primal optimum never exceeds the exact optimum") {
  Rng rng(5);
  for (std::uint64_t s = 0; s < 6; ++s) {
    diagnostics::RandomMdpSpec spec;
    spec.num_states = 3;
    spec.num_actions = 2;
    auto m = diagnostics::random_mdp(spec, 50 + s);
    features::FeatureSet fs;
    const std::size_t k = 4;
    for (std::size_t u = 0; u < 2; ++u) {
      Matrix t(3, k);
      for (double& v : t.data()) v = rng.uniform();  // nonnegative random basis
      fs.phi.push_back(std::move(t));
    }
    fs.psi = Matrix::identity(3);
    auto exact = lp::solve(build_exact_lp(m));
    auto reduced = lp::solve(build_reduced_primal_lp(m, fs));
    REQUIRE(exact.status == lp::SolveStatus::Optimal);
    if (reduced.status == lp::SolveStatus::Optimal)
      CHECK(reduced.objective <= exact.objective + 1e-7);
  }
}

TEST_CASE("occupancy of the single-state policy is the geometric series") {
  SampledMdp m = single_state_mdp(0.5);
  auto policy = StochasticPolicy::pure(1, 1, 0);
  auto occ = occupancy_of_policy(m, policy, 60);
  CHECK(occ.values(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("occupancy total matches the truncated geometric sum") {
  diagnostics::RandomMdpSpec spec;
  spec.num_states = 4;
  spec.num_actions = 2;
  spec.gamma = 0.9;
  auto m = diagnostics::random_mdp(spec, 11);
  auto policy = StochasticPolicy::uniform(4, 2);
  const std::size_t horizon = 100;
  auto occ = occupancy_of_policy(m, policy, horizon);
  const double expected =
      (1.0 - std::pow(0.9, static_cast<double>(horizon + 1))) / (1.0 - 0.9);
  CHECK(occ.total() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("optimal measure and its greedy policy occupancy agree") {
  diagnostics::RandomMdpSpec spec;
  spec.num_states = 3;
  spec.num_actions = 2;
  auto m = diagnostics::random_mdp(spec, 21);
  auto sol = lp::solve(build_exact_lp(m));
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  auto mu_star = measure_from_flat(m, sol.x);
  auto policy = policy_from_measure(mu_star);
  const std::size_t horizon = truncation_horizon(m.discount, m.max_abs_reward(), 1e-10);
  auto occ = occupancy_of_policy(m, policy, horizon);
  CHECK(occ.weighted_total(m.reward) == doctest::Approx(sol.objective).epsilon(1e-8));
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t u = 0; u < 2; ++u)
      CHECK(occ.values(x, u) == doctest::Approx(mu_star(x, u)).epsilon(1e-6));
}

TEST_CASE("policy rows must be distributions") {
  StochasticPolicy p;
  p.prob = Matrix(2, 2);
  p.prob(0, 0) = 0.6;
  p.prob(0, 1) = 0.4;
  p.prob(1, 0) = 0.9;
  p.prob(1, 1) = 0.2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("validation rejects broken transition rows") {
  SampledMdp m = single_state_mdp(0.5);
  m.transition[0].val[0] = 0.9;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("sparsification drops dust and renormalizes") {
  Matrix rows(2, 2);
  rows(0, 0) = 1.0;
  rows(0, 1) = 1e-15;
  rows(1, 0) = 0.5;
  rows(1, 1) = 0.5;
  auto csr = make_stochastic_csr(rows);
  CHECK(csr.row_ptr[1] - csr.row_ptr[0] == 1);  // dust entry dropped
  CHECK(csr.row_sum(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(csr.row_sum(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("json round trip preserves the instance") {
  diagnostics::RandomMdpSpec spec;
  spec.num_states = 4;
  spec.num_actions = 3;
  spec.with_budget = true;
  auto m = diagnostics::random_mdp(spec, 99);
  auto m2 = mdp_from_json(to_json(m));
  CHECK(m2.states == m.states);
  CHECK(m2.actions == m.actions);
  CHECK(m2.initial == m.initial);
  CHECK(m2.discount == m.discount);
  CHECK(m2.cost_budget == m.cost_budget);
  CHECK(m2.reward.data() == m.reward.data());
  CHECK(m2.cost.data() == m.cost.data());
  for (std::size_t u = 0; u < 3; ++u) {
    CHECK(m2.transition[u].col == m.transition[u].col);
    CHECK(m2.transition[u].val == m.transition[u].val);
  }
  // objective of the round-tripped instance is bit-identical
  auto s1 = lp::solve(build_exact_lp(m));
  auto s2 = lp::solve(build_exact_lp(m2));
  CHECK(s1.objective == s2.objective);
}

TEST_CASE("binding cost budget can only lower the optimum") {
  diagnostics::RandomMdpSpec spec;
  spec.num_states = 4;
  spec.num_actions = 2;
  spec.gamma = 0.9;
  auto m = diagnostics::random_mdp(spec, 33);
  auto unconstrained = lp::solve(build_exact_lp(m));
  REQUIRE(unconstrained.status == lp::SolveStatus::Optimal);

  diagnostics::RandomMdpSpec spec_budget = spec;
  spec_budget.with_budget = true;
  auto mb = diagnostics::random_mdp(spec_budget, 33);
  auto constrained = lp::solve(build_exact_lp(mb));
  REQUIRE(constrained.status == lp::SolveStatus::Optimal);
  CHECK(constrained.objective <= unconstrained.objective + 1e-9);
}
