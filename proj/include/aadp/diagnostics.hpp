#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aadp/aadp.hpp"
#include "aadp/mdp.hpp"

namespace aadp::diagnostics {

/// (1, r) norm: |sum_{x,u} a(x,u) r(x,u)|.
double norm_1r(const Matrix& a, const Matrix& r);

/// J-hat of a weighted basis measure on an instance with action-independent
/// rewards r(x) != 0 and action-independent transitions: computed directly as
/// J(x) = r(x) * sum_u (Phi theta)(x,u) and, for cross-checking, by solving
/// (I - gamma Q) J = g with Q[x][x'] = P[x'][x] r(x)/r(x') and g = nu .* r.
struct JhatResult {
  std::vector<double> direct;
  std::vector<double> solved;
  double max_diff = 0.0;
};

/// Throws std::invalid_argument when the instance violates the
/// action-independence or r(x) != 0 preconditions; when assert_consistent is
/// set (theta claimed feasible), also throws std::runtime_error if the two
/// routes disagree beyond 1e-7.
JhatResult j_hat(const mdp::SampledMdp& mdp, const std::vector<double>& theta,
                 const features::FeatureSet& features, bool assert_consistent = true);

struct BoundReport {
  std::string instance;
  double gamma = 0.0;
  double lhs = 0.0;  // ||J* - J-hat||_1
  double rhs = 0.0;  // ||mu* - Phi theta||_{1,r} / (1 - gamma)
  bool holds = false;
};

/// Evaluates both sides of the value-error bound on a conformant instance.
/// Records whether the inequality holds; never asserts it.
BoundReport check_theorem_bound(const mdp::SampledMdp& mdp, const AadpResult& result,
                                const features::FeatureSet& features,
                                const std::string& instance_name);

void write_bound_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports);

struct EquivalenceCheck {
  double lp_objective = 0.0;
  double policy_objective = 0.0;  // reward collected by the extracted policy's occupancy
  double flow_residual = 0.0;     // max flow-balance violation of that occupancy
  bool pass = false;
};

/// Occupation-measure equivalence on a small instance: the greedy policy
/// extracted from the optimal measure must reproduce the LP objective through
/// exact truncated occupancy propagation (1e-6), with flow balance holding to
/// the truncation tolerance.
EquivalenceCheck appendix_equivalence(const mdp::SampledMdp& mdp);
bool appendix_equivalence_test(const mdp::SampledMdp& mdp);

// Small-instance reference solvers, independent of the LP path. These back
// the bundled oracle suite and the test harness.

/// nu-weighted optimal value by value iteration to a 1e-10 fixed point.
double value_iteration_value(const mdp::SampledMdp& mdp, double tol = 1e-10);

/// nu-weighted optimal value over all deterministic stationary policies,
/// each evaluated by a dense linear solve. Only for unconstrained instances
/// with |U|^|S'| small.
double enumerate_policies_value(const mdp::SampledMdp& mdp);

struct RandomMdpSpec {
  std::size_t num_states = 4;
  std::size_t num_actions = 2;
  double gamma = 0.9;
  bool conformant = false;   // action-independent P and positive r(x)
  bool with_budget = false;  // random cost table plus a finite budget
};

/// Deterministic random instance; states are points in the unit square.
mdp::SampledMdp random_mdp(const RandomMdpSpec& spec, std::uint64_t seed);

}  // namespace aadp::diagnostics
