#include "aadp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "aadp/rng.hpp"

namespace aadp::pricing {

std::size_t GbmModel::num_steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

double GbmModel::step_discount() const { return std::exp(-drift * dt); }

void GbmModel::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("GbmModel: sigma must be > 0");
  if (!(dt > 0.0 && dt <= horizon)) throw std::invalid_argument("GbmModel: need 0 < dt <= horizon");
  const double m = std::llround(horizon / dt);
  if (std::abs(m * dt - horizon) > 1e-12)
    throw std::invalid_argument("GbmModel: horizon must be an integer number of steps");
}

void OptionContract::validate() const {
  if (!(strike > 0.0)) throw std::invalid_argument("OptionContract: strike must be > 0");
  if (n_assets == 0) throw std::invalid_argument("OptionContract: need at least one asset");
  if (initial_prices.size() != n_assets)
    throw std::invalid_argument("OptionContract: initial price per asset required");
  for (double p : initial_prices)
    if (!(p > 0.0)) throw std::invalid_argument("OptionContract: initial prices must be > 0");
  if (kind == ContractKind::BermudanMaxCallBarrier) {
    if (!(std::isfinite(barrier) && barrier > strike))
      throw std::invalid_argument("OptionContract: barrier must be finite and above the strike");
  }
}

double OptionContract::payoff(std::span<const double> prices, double knocked_out) const {
  double best = 0.0;
  for (double p : prices) best = std::max(best, p);
  return std::max(best - strike, 0.0) * (1.0 - knocked_out);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double bs_call(double spot, double strike, double rate, double sigma, double tau) {
  if (!(spot > 0.0 && strike > 0.0 && sigma > 0.0))
    throw std::invalid_argument("bs_call: spot, strike and sigma must be > 0");
  if (tau < 0.0) throw std::invalid_argument("bs_call: negative time to maturity");
  if (tau == 0.0) return std::max(spot - strike, 0.0);
  const double sq = sigma * std::sqrt(tau);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / sq;
  const double d2 = d1 - sq;
  return norm_cdf(d1) * spot - norm_cdf(d2) * strike * std::exp(-rate * tau);
}

Matrix gbm_transition_matrix(const GbmModel& model, const std::vector<double>& grid) {
  model.validate();
  if (grid.empty()) throw std::invalid_argument("gbm_transition_matrix: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("gbm_transition_matrix: grid must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw std::invalid_argument("gbm_transition_matrix: grid must be sorted ascending");
  }
  const std::size_t n = grid.size();
  const double drift_term = (model.drift - 0.5 * model.sigma * model.sigma) * model.dt;
  const double var2 = 2.0 * model.sigma * model.sigma * model.dt;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double z = std::log(grid[j] / grid[i]) - drift_term;
      const double w = std::exp(-z * z / var2) / grid[j];
      out(i, j) = w;
      sum += w;
    }
    for (std::size_t j = 0; j < n; ++j) out(i, j) /= sum;
  }
  return out;
}

std::vector<double> american_price_grid(const GbmModel& model, double s0,
                                        std::size_t count) {
  model.validate();
  if (!(s0 > 0.0)) throw std::invalid_argument("american_price_grid: s0 must be > 0");
  if (count < 2) throw std::invalid_argument("american_price_grid: need at least 2 points");
  const double mu = std::log(s0) + (model.drift - 0.5 * model.sigma * model.sigma) * model.horizon;
  const double span = 6.0 * model.sigma * std::sqrt(model.horizon);
  const double lo = std::exp(mu - span), hi = std::exp(mu + span);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

std::vector<std::vector<double>> sample_bermudan_states(const GbmModel& model,
                                                        const OptionContract& contract,
                                                        std::size_t count,
                                                        std::uint64_t seed) {
  model.validate();
  contract.validate();
  if (count < 2) throw std::invalid_argument("sample_bermudan_states: need at least 2 states");
  const std::size_t n = contract.n_assets;
  const std::size_t steps = model.num_steps();
  const double drift_term = (model.drift - 0.5 * model.sigma * model.sigma) * model.dt;
  const double vol = model.sigma * std::sqrt(model.dt);

  double y0 = 0.0;
  for (double p : contract.initial_prices)
    if (p >= contract.barrier) y0 = 1.0;
  std::vector<double> initial = contract.initial_prices;
  initial.push_back(y0);

  // pool live (not knocked out) path points; knocked-out states are worthless
  // and collapse to the terminal state, so sample budget goes to live ones
  std::vector<std::vector<double>> pool;
  std::size_t path = 0;
  while (pool.size() < 4 * (count - 1) && path < 64 * count) {
    Rng rng(mix_seed(seed, path++));
    std::vector<double> p = contract.initial_prices;
    double y = y0;
    for (std::size_t t = 0; t < steps && y == 0.0; ++t) {
      double mx = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        p[a] *= std::exp(drift_term + vol * rng.normal());
        mx = std::max(mx, p[a]);
      }
      if (mx >= contract.barrier) y = 1.0;
      if (y == 1.0) break;
      std::vector<double> state = p;
      state.push_back(0.0);
      pool.push_back(std::move(state));
    }
  }
  if (pool.size() < count - 1)
    throw std::runtime_error("sample_bermudan_states: not enough live path points");
  // deterministic stride pick of count-1 pool points, dates interleaved
  std::vector<std::vector<double>> out;
  out.push_back(std::move(initial));
  const std::size_t want = count - 1;
  for (std::size_t i = 0; i < want; ++i) {
    const std::size_t idx = (i * pool.size()) / want;
    out.push_back(pool[idx]);
  }
  return out;
}

namespace {

bool is_barrier(const OptionContract& c) {
  return c.kind == ContractKind::BermudanMaxCallBarrier;
}

double knockout_flag(const OptionContract& c, const std::vector<double>& state) {
  return is_barrier(c) ? state.back() : 0.0;
}

std::span<const double> price_part(const OptionContract& c, const std::vector<double>& state) {
  return {state.data(), is_barrier(c) ? state.size() - 1 : state.size()};
}

}  // namespace

StoppingMdp build_stopping_mdp(const GbmModel& model, const OptionContract& contract,
                               const std::vector<std::vector<double>>& sampled_states) {
  model.validate();
  contract.validate();
  if (sampled_states.empty()) throw std::invalid_argument("build_stopping_mdp: no states");
  const std::size_t dim = is_barrier(contract) ? contract.n_assets + 1 : contract.n_assets;
  for (const auto& s : sampled_states)
    if (s.size() != dim) throw std::invalid_argument("build_stopping_mdp: state dimension mismatch");

  StoppingMdp sm;
  const std::size_t live = sampled_states.size();
  const std::size_t total = live + 1;
  sm.terminal_index = live;
  sm.exercise_action = 0;
  sm.hold_action = 1;

  mdp::SampledMdp& m = sm.mdp;
  m.states = sampled_states;
  std::vector<double> terminal(dim, 0.0);
  if (is_barrier(contract)) terminal.back() = 1.0;
  m.states.push_back(terminal);
  m.actions = {"EXERCISE", "HOLD"};
  m.discount = model.step_discount();
  m.reward = Matrix(total, 2);
  m.cost = Matrix(total, 2);
  for (std::size_t x = 0; x < live; ++x)
    m.reward(x, 0) = contract.payoff(price_part(contract, sampled_states[x]),
                                     knockout_flag(contract, sampled_states[x]));

  // EXERCISE absorbs into the terminal state
  Matrix exercise(total, total);
  for (std::size_t x = 0; x < total; ++x) exercise(x, sm.terminal_index) = 1.0;
  m.transition.push_back(mdp::make_stochastic_csr(exercise));

  Matrix hold(total, total);
  if (!is_barrier(contract)) {
    std::vector<double> grid(live);
    for (std::size_t x = 0; x < live; ++x) grid[x] = sampled_states[x][0];
    const Matrix gbm = gbm_transition_matrix(model, grid);
    for (std::size_t x = 0; x < live; ++x)
      for (std::size_t j = 0; j < live; ++j) hold(x, j) = gbm(x, j);
    for (std::size_t x = 0; x < live; ++x) sm.evaluable.push_back(x);
  } else {
    const double drift_term = (model.drift - 0.5 * model.sigma * model.sigma) * model.dt;
    const double var2 = 2.0 * model.sigma * model.sigma * model.dt;
    const double vol = model.sigma * std::sqrt(model.dt);
    for (std::size_t x = 0; x < live; ++x) {
      const auto& from = sampled_states[x];
      if (from.back() == 1.0) {
        // knocked out: worthless, value-equivalent to the terminal state
        hold(x, sm.terminal_index) = 1.0;
        continue;
      }
      sm.evaluable.push_back(x);
      // knockout probability in closed form: one asset crossing the barrier
      // kills the option, so that mass goes straight to the terminal state
      double alive = 1.0;
      for (std::size_t a = 0; a < contract.n_assets; ++a)
        alive *= norm_cdf((std::log(contract.barrier / from[a]) - drift_term) / vol);
      // density over the live sampled targets carries the surviving mass
      double row_sum = 0.0;
      for (std::size_t j = 0; j < live; ++j) {
        const auto& to = sampled_states[j];
        if (to.back() == 1.0) continue;
        double w = 1.0;
        for (std::size_t a = 0; a < contract.n_assets; ++a) {
          const double z = std::log(to[a] / from[a]) - drift_term;
          w *= std::exp(-z * z / var2) / to[a];
        }
        hold(x, j) = w;
        row_sum += w;
      }
      if (row_sum <= 0.0) {
        hold(x, sm.terminal_index) = 1.0;  // isolated point
      } else {
        for (std::size_t j = 0; j < live; ++j) hold(x, j) *= alive / row_sum;
        hold(x, sm.terminal_index) = 1.0 - alive;
      }
    }
  }
  hold(sm.terminal_index, sm.terminal_index) = 1.0;
  m.transition.push_back(mdp::make_stochastic_csr(hold));

  // point mass at the sampled state nearest the initial prices
  std::vector<double> start(contract.initial_prices);
  if (is_barrier(contract)) start.push_back(0.0);
  double best = lp::kInf;
  for (std::size_t x = 0; x < live; ++x) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = m.states[x][c] - start[c];
      d2 += d * d;
    }
    if (d2 < best) {
      best = d2;
      sm.initial_index = x;
    }
  }
  m.initial.assign(total, 0.0);
  m.initial[sm.initial_index] = 1.0;
  m.validate();
  return sm;
}

mdp::StochasticPolicy always_hold_policy(const StoppingMdp& sm) {
  return mdp::StochasticPolicy::pure(sm.mdp.num_states(), 2, sm.hold_action);
}

mdp::StochasticPolicy always_exercise_policy(const StoppingMdp& sm) {
  return mdp::StochasticPolicy::pure(sm.mdp.num_states(), 2, sm.exercise_action);
}

double epsilon_optimal_rate(const StoppingMdp& sm, const mdp::StochasticPolicy& policy,
                            const mdp::StochasticPolicy& reference, double epsilon) {
  if (sm.evaluable.empty()) return 0.0;
  if (policy.prob.rows() != sm.mdp.num_states() ||
      reference.prob.rows() != sm.mdp.num_states())
    throw std::invalid_argument("epsilon_optimal_rate: policy defined on a different state set");
  std::size_t good = 0;
  for (std::size_t x : sm.evaluable) {
    const double diff =
        std::abs(reference.prob(x, sm.hold_action) - policy.prob(x, sm.hold_action));
    if (diff < epsilon) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(sm.evaluable.size());
}

namespace {

// Nearest live sampled state under the Euclidean metric on log prices.
class StateIndex {
 public:
  StateIndex(const StoppingMdp& sm, const OptionContract& contract) {
    const std::size_t n = contract.n_assets;
    for (std::size_t x : sm.evaluable) {
      std::vector<double> lp(n);
      for (std::size_t a = 0; a < n; ++a) lp[a] = std::log(sm.mdp.states[x][a]);
      log_prices_.push_back(std::move(lp));
      index_.push_back(x);
    }
    one_dim_sorted_ = n == 1;
    for (std::size_t i = 1; one_dim_sorted_ && i < log_prices_.size(); ++i)
      if (log_prices_[i][0] < log_prices_[i - 1][0]) one_dim_sorted_ = false;
  }

  std::size_t nearest(std::span<const double> prices) const {
    if (one_dim_sorted_) {
      const double z = std::log(prices[0]);
      auto it = std::lower_bound(log_prices_.begin(), log_prices_.end(), z,
                                 [](const std::vector<double>& a, double v) { return a[0] < v; });
      std::size_t j = static_cast<std::size_t>(it - log_prices_.begin());
      if (j == log_prices_.size()) return index_.back();
      if (j > 0 && z - log_prices_[j - 1][0] <= log_prices_[j][0] - z) --j;
      return index_[j];
    }
    std::size_t best = 0;
    double best_d = lp::kInf;
    for (std::size_t i = 0; i < log_prices_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < prices.size(); ++a) {
        const double d = std::log(prices[a]) - log_prices_[i][a];
        d2 += d * d;
      }
      if (d2 < best_d) {
        best_d = d2;
        best = i;
      }
    }
    return index_[best];
  }

 private:
  std::vector<std::vector<double>> log_prices_;
  std::vector<std::size_t> index_;
  bool one_dim_sorted_ = false;
};

}  // namespace

SimResult simulate_policy_price(const GbmModel& model, const OptionContract& contract,
                                const StoppingMdp& sm,
                                const mdp::StochasticPolicy& policy,
                                std::size_t n_paths, std::uint64_t seed) {
  model.validate();
  contract.validate();
  if (n_paths == 0) throw std::invalid_argument("simulate_policy_price: need n_paths >= 1");
  policy.validate();
  const StateIndex index(sm, contract);
  const std::size_t steps = model.num_steps();
  const std::size_t n = contract.n_assets;
  const double drift_term = (model.drift - 0.5 * model.sigma * model.sigma) * model.dt;
  const double vol = model.sigma * std::sqrt(model.dt);
  const bool barrier = is_barrier(contract);
  // American contracts may exercise immediately; Bermudan dates start at dt
  const std::size_t first_decision = barrier ? 1 : 0;

  std::vector<double> payoffs(n_paths, 0.0);
  auto run_path = [&](std::size_t path) {
    Rng rng(mix_seed(seed, path));
    std::vector<double> p = contract.initial_prices;
    double y = 0.0;
    if (barrier)
      for (double v : p)
        if (v >= contract.barrier) y = 1.0;
    for (std::size_t t = 0; t <= steps; ++t) {
      if (barrier && y == 1.0) return 0.0;  // knocked out, worthless
      const double payoff = contract.payoff(p, y);
      if (t == steps) return payoff * std::exp(-model.drift * model.horizon);
      if (t >= first_decision) {
        const std::size_t xs = index.nearest(p);
        const double coin = rng.uniform();
        if (coin < policy.prob(xs, sm.exercise_action))
          return payoff * std::exp(-model.drift * model.dt * static_cast<double>(t));
      }
      double mx = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        p[a] *= std::exp(drift_term + vol * rng.normal());
        mx = std::max(mx, p[a]);
      }
      if (barrier && mx >= contract.barrier) y = 1.0;
    }
    return 0.0;  // unreachable
  };

  const std::size_t min_parallel = 4096;
  if (n_paths >= min_parallel) {
    const std::size_t workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t i = w; i < n_paths; i += workers) payoffs[i] = run_path(i);
      });
    }
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t i = 0; i < n_paths; ++i) payoffs[i] = run_path(i);
  }

  SimResult out;
  out.n_paths = n_paths;
  out.mean = compensated_sum(payoffs) / static_cast<double>(n_paths);
  if (n_paths > 1) {
    std::vector<double> sq(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
      const double d = payoffs[i] - out.mean;
      sq[i] = d * d;
    }
    out.std_per_path =
        std::sqrt(compensated_sum(sq) / static_cast<double>(n_paths - 1));
    out.std_error = out.std_per_path / std::sqrt(static_cast<double>(n_paths));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.model.validate();
  config.contract.validate();
  std::vector<std::vector<double>> states;
  if (config.contract.kind == ContractKind::AmericanCall) {
    states.reserve(config.samples);
    const auto grid = american_price_grid(config.model, config.contract.initial_prices[0],
                                          config.samples);
    for (double g : grid) states.push_back({g});
  } else {
    states = sample_bermudan_states(config.model, config.contract, config.samples,
                                    config.aadp.seed);
  }
  const StoppingMdp sm = build_stopping_mdp(config.model, config.contract, states);

  ExperimentResult out;
  out.num_states = sm.mdp.num_states();
  out.aadp = run_aadp(sm.mdp, config.aadp);
  if (config.contract.kind == ContractKind::AmericanCall)
    out.closed_form = bs_call(config.contract.initial_prices[0], config.contract.strike,
                              config.model.drift, config.model.sigma, config.model.horizon);
  if (out.aadp.status != AadpStatus::Ok) return out;
  out.rho = epsilon_optimal_rate(sm, out.aadp.policy, always_hold_policy(sm),
                                 config.rho_epsilon);
  out.simulated = simulate_policy_price(config.model, config.contract, sm,
                                        out.aadp.policy, config.n_paths, config.sim_seed);
  return out;
}

}  // namespace aadp::pricing
