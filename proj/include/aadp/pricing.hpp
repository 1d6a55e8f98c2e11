#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aadp/aadp.hpp"
#include "aadp/mdp.hpp"

namespace aadp::pricing {

/// Per-asset geometric Brownian motion plus the time grid. `drift` is the
/// risk-free rate in the experiments; the per-step discount of the stopping
/// problem is exp(-drift * dt).
struct GbmModel {
  double drift = 0.05;   // per year
  double sigma = 0.2;    // per sqrt(year)
  double horizon = 1.0;  // years
  double dt = 0.01;      // years per step

  std::size_t num_steps() const;
  double step_discount() const;
  void validate() const;  // sigma > 0, 0 < dt <= horizon, M dt = horizon
};

enum class ContractKind { AmericanCall, BermudanMaxCallBarrier };

struct OptionContract {
  ContractKind kind = ContractKind::AmericanCall;
  double strike = 100.0;
  double barrier = lp::kInf;  // barrier kind only, must exceed the strike
  std::size_t n_assets = 1;
  std::vector<double> initial_prices;

  void validate() const;
  /// Exercise payoff of a price vector with knockout flag y.
  double payoff(std::span<const double> prices, double knocked_out) const;
};

/// Standard normal CDF via erfc, accurate to double precision.
double norm_cdf(double z);

/// Closed-form call price; tau = 0 returns the intrinsic value.
double bs_call(double spot, double strike, double rate, double sigma, double tau);

/// One-step lognormal transition density on a sorted positive grid, each row
/// renormalized to sum to 1 (entry weight ~ density(x -> x') / x').
Matrix gbm_transition_matrix(const GbmModel& model, const std::vector<double>& grid);

/// Uniform price grid of `count` points spanning +-6 standard deviations of
/// the terminal log price around the initial price.
std::vector<double> american_price_grid(const GbmModel& model, double s0,
                                        std::size_t count);

/// Sampled states (p_1..p_n, y) for the barrier problem, pooled from
/// simulated paths across the exercise dates; the first entry is the initial
/// state. Knocked-out path points keep y = 1.
std::vector<std::vector<double>> sample_bermudan_states(const GbmModel& model,
                                                        const OptionContract& contract,
                                                        std::size_t count,
                                                        std::uint64_t seed);

/// Optimal-stopping MDP around a sampled state set: actions {EXERCISE, HOLD},
/// exercise pays the contract payoff and moves to an absorbing terminal
/// state, hold moves per the (knockout-consistent) transition model, discount
/// exp(-drift dt), initial distribution a point mass at the state nearest the
/// initial prices.
struct StoppingMdp {
  mdp::SampledMdp mdp;
  std::size_t exercise_action = 0;
  std::size_t hold_action = 1;
  std::size_t terminal_index = 0;
  std::size_t initial_index = 0;
  std::vector<std::size_t> evaluable;  // live sampled states (no terminal, y = 0)
};

StoppingMdp build_stopping_mdp(const GbmModel& model, const OptionContract& contract,
                               const std::vector<std::vector<double>>& sampled_states);

/// Reference policy of the no-dividend call: hold everywhere.
mdp::StochasticPolicy always_hold_policy(const StoppingMdp& sm);
mdp::StochasticPolicy always_exercise_policy(const StoppingMdp& sm);

/// Fraction of evaluable states where |pi_ref(HOLD|x) - pi(HOLD|x)| < epsilon.
double epsilon_optimal_rate(const StoppingMdp& sm, const mdp::StochasticPolicy& policy,
                            const mdp::StochasticPolicy& reference, double epsilon);

struct SimResult {
  double mean = 0.0;
  double std_per_path = 0.0;  // sample standard deviation of discounted payoffs
  double std_error = 0.0;     // std_per_path / sqrt(n_paths)
  std::size_t n_paths = 0;
};

/// Monte-Carlo valuation of a stopping policy: paths step by dt, the policy
/// is sampled at the nearest live sampled state (Euclidean metric on log
/// prices), exercise collects the discounted payoff, and any remaining value
/// settles at maturity. Per-path RNG streams derive from (seed, path index);
/// the reduction uses compensated summation, so the result is independent of
/// scheduling.
SimResult simulate_policy_price(const GbmModel& model, const OptionContract& contract,
                                const StoppingMdp& sm,
                                const mdp::StochasticPolicy& policy,
                                std::size_t n_paths, std::uint64_t seed);

/// One full experiment: sample states, run the kernelized solve, score the
/// policy against always-hold, and simulate its price.
struct ExperimentConfig {
  GbmModel model;
  OptionContract contract;
  std::size_t samples = 200;  // I
  AadpOptions aadp;
  double rho_epsilon = 0.1;
  std::size_t n_paths = 1000;
  std::uint64_t sim_seed = 0;
};

struct ExperimentResult {
  AadpResult aadp;
  double rho = 0.0;          // epsilon-optimal rate vs always-hold
  SimResult simulated;       // price of the learned policy
  double closed_form = 0.0;  // Black-Scholes reference (American call only)
  std::size_t num_states = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace aadp::pricing
