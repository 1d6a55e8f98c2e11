#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "aadp/linalg.hpp"
#include "aadp/lp.hpp"

namespace aadp::features {
struct FeatureSet;
}

namespace aadp::mdp {

/// Square sparse matrix in CSR layout; rows index the source state.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  // n + 1
  std::vector<std::size_t> col;
  std::vector<double> val;

  double row_sum(std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k];
    return s;
  }

  /// y = A^T x, the forward push of a source distribution.
  std::vector<double> tmul(std::span<const double> x) const;
};

/// Builds a row-stochastic CSR matrix from dense rows: each row is
/// renormalized to sum to 1, entries below drop_tol are removed, and the row
/// is renormalized once more. A row that sums to zero is rejected.
CsrMatrix make_stochastic_csr(const Matrix& rows, double drop_tol = 1e-12);

/// Finite sampled constrained MDP. Transition entry P(u)[x][x'] is the
/// probability of moving from state x to x' under action u, so every row of
/// every transition matrix sums to 1.
struct SampledMdp {
  std::vector<std::vector<double>> states;  // |S'| state vectors, dim >= 1
  std::vector<std::string> actions;
  std::vector<CsrMatrix> transition;  // one per action
  Matrix reward;                      // |S'| x |U|
  Matrix cost;                        // |S'| x |U|
  double cost_budget = lp::kInf;      // +inf disables the budget row
  double discount = 0.9;
  std::vector<double> initial;  // nu, sums to 1

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions() const { return actions.size(); }
  std::size_t state_dim() const { return states.empty() ? 0 : states.front().size(); }
  bool has_cost_budget() const;
  double max_abs_reward() const;

  /// Throws std::invalid_argument on any violated invariant: non-stochastic
  /// transition rows (1e-9), negative entries, nu not summing to 1 (1e-12),
  /// or discount outside (0,1).
  void validate() const;
};

struct OccupationMeasure {
  Matrix values;  // |S'| x |U|, all >= 0
  bool normalized = false;

  double total() const;
  /// sum_{x,u} values(x,u) * weight(x,u)
  double weighted_total(const Matrix& weight) const;
};

struct StochasticPolicy {
  Matrix prob;  // |S'| x |U|, rows sum to 1

  void validate() const;
  static StochasticPolicy uniform(std::size_t states, std::size_t actions);
  /// Puts probability 1 on `action` in every state.
  static StochasticPolicy pure(std::size_t states, std::size_t actions,
                               std::size_t action);
};

/// Occupation-measure LP: one variable per (x,u) pair, one flow-balance
/// equality per state, an optional cost-budget row, and mu >= 0 bounds;
/// maximizes total reward.
lp::DenseLp build_exact_lp(const SampledMdp& mdp);

/// Variable-reduced LP over theta >= 0 with the same rows expressed through
/// the state-action features.
lp::DenseLp build_reduced_primal_lp(const SampledMdp& mdp,
                                    const features::FeatureSet& phi);

/// Exact truncated occupancy sum_{t=0}^{horizon} gamma^t P(x_t, u_t) by
/// forward propagation of the state-action distribution.
OccupationMeasure occupancy_of_policy(const SampledMdp& mdp,
                                      const StochasticPolicy& policy,
                                      std::size_t horizon);

/// Conditional policy pi(u|x) = mu(x,u) / sum_u mu(x,u); states with an
/// all-zero row get a uniform row.
StochasticPolicy policy_from_measure(const Matrix& mu);

/// Smallest horizon H with gamma^H * scale < tol.
std::size_t truncation_horizon(double gamma, double scale, double tol);

/// Reshapes an exact-LP solution vector back into an |S'| x |U| table.
Matrix measure_from_flat(const SampledMdp& mdp, const std::vector<double>& x);

// JSON serialization (schema in docs/formats.md).
std::string to_json(const SampledMdp& mdp);
SampledMdp mdp_from_json(const std::string& text);
SampledMdp load_mdp(const std::string& path);
void save_mdp(const SampledMdp& mdp, const std::string& path);

}  // namespace aadp::mdp
