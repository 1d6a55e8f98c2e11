#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "aadp/features.hpp"
#include "aadp/lp.hpp"
#include "aadp/mdp.hpp"

namespace aadp {

/// The doubly-reduced dual LP: variables are the l free weights beta on the
/// state basis psi plus, when the cost budget is active, one multiplier
/// omega >= 0; one >= row per state-action feature phi_i. Its row duals are
/// the theta weights of the variable-reduced primal.
struct ReducedDualLp {
  lp::DenseLp problem;
  std::size_t k = 0;  // rows
  std::size_t l = 0;  // beta columns
  bool has_budget_column = false;
};

enum class AadpStatus {
  Ok,
  LpInfeasible,
  LpUnbounded,
  LpNumericalFailure,
  DegenerateMeasure,  // all of sum_i theta_i phi_i clipped away
};

const char* to_string(AadpStatus s);

struct AadpResult {
  AadpStatus status = AadpStatus::LpNumericalFailure;
  std::vector<double> theta;  // k row duals, >= 0 up to solver tolerance
  std::vector<double> beta;   // l primal weights
  double omega = 0.0;
  mdp::OccupationMeasure mu;     // normalized to a probability measure
  mdp::StochasticPolicy policy;  // pi(u|x) = mu(x,u) / sum_u mu(x,u)
  double clipped_mass = 0.0;     // negative mass zeroed before normalization
  lp::SolveStatus lp_status = lp::SolveStatus::NumericalFailure;
  double lp_objective = 0.0;
  int lp_iterations = 0;
  ReducedDualLp problem;  // retained for inspection on any outcome
};

/// Assembles the reduced dual with slack `epsilon` added to the budget
/// (objective only); requires phi to cover S' x U and psi to cover S'.
ReducedDualLp build_reduced_dual(const mdp::SampledMdp& mdp,
                                 const features::FeatureSet& features,
                                 double epsilon);

/// Solves the reduced dual, reads theta off the row duals, clips negative
/// values of sum_i theta_i phi_i to zero, normalizes to the occupation
/// measure, and derives the policy. Non-optimal solves and an all-zero
/// clipped measure are reported in the status, never thrown.
AadpResult solve_with_features(const mdp::SampledMdp& mdp,
                               const features::FeatureSet& features,
                               double epsilon = 0.0);

struct AadpOptions {
  std::size_t k = 100;
  std::size_t l = 100;
  features::FeatureStyle style = features::FeatureStyle::CosOnly;
  features::FrequencyMode mode = features::FrequencyMode::HadamardRademacher;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::optional<double> bandwidth;  // default: median pairwise state distance
  bool radii = true;
};

/// End-to-end kernelized run: generate random-Fourier bases from the options,
/// then solve. Deterministic for identical options and input.
AadpResult run_aadp(const mdp::SampledMdp& mdp, const AadpOptions& options);

/// CSV export: metadata header lines starting with '#', then one
/// (state, action, mu, pi) row per pair. Columns in docs/formats.md.
void write_result_csv(std::ostream& os, const mdp::SampledMdp& mdp,
                      const AadpResult& result, const std::string& run_info);

}  // namespace aadp
