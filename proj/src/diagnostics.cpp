#include "aadp/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "aadp/rng.hpp"

namespace aadp::diagnostics {

double norm_1r(const Matrix& a, const Matrix& r) {
  if (a.rows() != r.rows() || a.cols() != r.cols())
    throw std::invalid_argument("norm_1r: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += dot(a.row(i), r.row(i));
  return std::abs(s);
}

namespace {

// Checks r(x,u) = r(x) and P(u) = P, returning the shared reward vector.
std::vector<double> conformant_rewards(const mdp::SampledMdp& m) {
  const std::size_t ns = m.num_states(), na = m.num_actions();
  std::vector<double> r(ns);
  for (std::size_t x = 0; x < ns; ++x) {
    r[x] = m.reward(x, 0);
    for (std::size_t u = 1; u < na; ++u)
      if (std::abs(m.reward(x, u) - r[x]) > 1e-12)
        throw std::invalid_argument("j_hat: reward depends on the action");
    if (r[x] == 0.0) throw std::invalid_argument("j_hat: r(x) must be nonzero");
  }
  for (std::size_t u = 1; u < na; ++u) {
    const auto& t0 = m.transition[0];
    const auto& tu = m.transition[u];
    if (t0.row_ptr != tu.row_ptr || t0.col != tu.col)
      throw std::invalid_argument("j_hat: transitions depend on the action");
    for (std::size_t e = 0; e < t0.val.size(); ++e)
      if (std::abs(t0.val[e] - tu.val[e]) > 1e-12)
        throw std::invalid_argument("j_hat: transitions depend on the action");
  }
  return r;
}

Matrix weighted_basis_measure(const mdp::SampledMdp& m,
                              const features::FeatureSet& fs,
                              const std::vector<double>& theta) {
  const std::size_t ns = m.num_states(), na = m.num_actions();
  Matrix mu(ns, na);
  for (std::size_t u = 0; u < na; ++u)
    for (std::size_t x = 0; x < ns; ++x) {
      double v = 0.0;
      const auto row = fs.phi[u].row(x);
      for (std::size_t i = 0; i < theta.size(); ++i) v += theta[i] * row[i];
      mu(x, u) = v;
    }
  return mu;
}

}  // namespace

JhatResult j_hat(const mdp::SampledMdp& m, const std::vector<double>& theta,
                 const features::FeatureSet& fs, bool assert_consistent) {
  m.validate();
  fs.validate(m.num_states(), m.num_actions());
  if (theta.size() != fs.k()) throw std::invalid_argument("j_hat: theta size mismatch");
  const std::vector<double> r = conformant_rewards(m);
  const std::size_t ns = m.num_states(), na = m.num_actions();

  JhatResult out;
  const Matrix mu = weighted_basis_measure(m, fs, theta);
  out.direct.assign(ns, 0.0);
  for (std::size_t x = 0; x < ns; ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < na; ++u) s += mu(x, u);
    out.direct[x] = s * r[x];
  }

  // (I - gamma Q) J = g with Q[x][x'] = P[x' -> x] r(x)/r(x'), g(x) = nu(x) r(x)
  Matrix sys(ns, ns);
  for (std::size_t x = 0; x < ns; ++x) sys(x, x) = 1.0;
  const mdp::CsrMatrix& t = m.transition[0];
  for (std::size_t src = 0; src < ns; ++src) {
    for (std::size_t e = t.row_ptr[src]; e < t.row_ptr[src + 1]; ++e) {
      const std::size_t dst = t.col[e];
      sys(dst, src) -= m.discount * t.val[e] * r[dst] / r[src];
    }
  }
  std::vector<double> g(ns);
  for (std::size_t x = 0; x < ns; ++x) g[x] = m.initial[x] * r[x];
  out.solved = solve_linear(sys, g);

  for (std::size_t x = 0; x < ns; ++x)
    out.max_diff = std::max(out.max_diff, std::abs(out.direct[x] - out.solved[x]));
  if (assert_consistent && out.max_diff > 1e-7)
    throw std::runtime_error("j_hat: direct and linear-solve routes disagree; theta is not LP-feasible");
  return out;
}

BoundReport check_theorem_bound(const mdp::SampledMdp& m, const AadpResult& result,
                                const features::FeatureSet& fs,
                                const std::string& instance_name) {
  BoundReport rep;
  rep.instance = instance_name;
  rep.gamma = m.discount;
  const std::vector<double> r = conformant_rewards(m);
  const std::size_t ns = m.num_states(), na = m.num_actions();

  const lp::DenseLp exact = mdp::build_exact_lp(m);
  const lp::LpSolution sol = lp::solve(exact);
  if (sol.status != lp::SolveStatus::Optimal)
    throw std::runtime_error("check_theorem_bound: exact LP not solvable");
  const Matrix mu_star = mdp::measure_from_flat(m, sol.x);

  std::vector<double> theta(result.theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = std::max(result.theta[i], 0.0);
  const Matrix mu_hat = weighted_basis_measure(m, fs, theta);

  double lhs = 0.0;
  for (std::size_t x = 0; x < ns; ++x) {
    double star = 0.0, hat = 0.0;
    for (std::size_t u = 0; u < na; ++u) {
      star += mu_star(x, u);
      hat += mu_hat(x, u);
    }
    lhs += std::abs((star - hat) * r[x]);
  }
  Matrix diff(ns, na);
  for (std::size_t x = 0; x < ns; ++x)
    for (std::size_t u = 0; u < na; ++u) diff(x, u) = mu_star(x, u) - mu_hat(x, u);
  rep.lhs = lhs;
  rep.rhs = norm_1r(diff, m.reward) / (1.0 - m.discount);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-12;
  return rep;
}

void write_bound_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "instance_id,gamma,lhs,rhs,holds\n";
  char buf[128];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%d\n", r.instance.c_str(),
                  r.gamma, r.lhs, r.rhs, r.holds ? 1 : 0);
    os << buf;
  }
}

EquivalenceCheck appendix_equivalence(const mdp::SampledMdp& m) {
  EquivalenceCheck out;
  const lp::DenseLp exact = mdp::build_exact_lp(m);
  const lp::LpSolution sol = lp::solve(exact);
  if (sol.status != lp::SolveStatus::Optimal)
    throw std::runtime_error("appendix_equivalence: exact LP not solvable");
  out.lp_objective = sol.objective;

  const Matrix mu_star = mdp::measure_from_flat(m, sol.x);
  const mdp::StochasticPolicy policy = mdp::policy_from_measure(mu_star);
  const std::size_t horizon =
      mdp::truncation_horizon(m.discount, std::max(m.max_abs_reward(), 1.0), 1e-10);
  const mdp::OccupationMeasure occ = mdp::occupancy_of_policy(m, policy, horizon);
  out.policy_objective = occ.weighted_total(m.reward);

  // flow-balance residual of the truncated occupancy
  const std::size_t ns = m.num_states(), na = m.num_actions();
  std::vector<double> inflow(ns, 0.0);
  for (std::size_t u = 0; u < na; ++u) {
    const mdp::CsrMatrix& t = m.transition[u];
    for (std::size_t x = 0; x < ns; ++x) {
      for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e)
        inflow[t.col[e]] += m.discount * t.val[e] * occ.values(x, u);
    }
  }
  for (std::size_t x = 0; x < ns; ++x) {
    double lhs = 0.0;
    for (std::size_t u = 0; u < na; ++u) lhs += occ.values(x, u);
    out.flow_residual =
        std::max(out.flow_residual, std::abs(lhs - m.initial[x] - inflow[x]));
  }
  out.pass = std::abs(out.lp_objective - out.policy_objective) <= 1e-6 &&
             out.flow_residual <= 1e-6;
  return out;
}

bool appendix_equivalence_test(const mdp::SampledMdp& m) {
  return appendix_equivalence(m).pass;
}

double value_iteration_value(const mdp::SampledMdp& m, double tol) {
  m.validate();
  const std::size_t ns = m.num_states(), na = m.num_actions();
  std::vector<double> v(ns, 0.0), next(ns, 0.0);
  for (int iter = 0; iter < 5000000; ++iter) {
    double delta = 0.0;
    for (std::size_t x = 0; x < ns; ++x) {
      double best = -lp::kInf;
      for (std::size_t u = 0; u < na; ++u) {
        double q = m.reward(x, u);
        const mdp::CsrMatrix& t = m.transition[u];
        for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e)
          q += m.discount * t.val[e] * v[t.col[e]];
        best = std::max(best, q);
      }
      next[x] = best;
      delta = std::max(delta, std::abs(next[x] - v[x]));
    }
    v.swap(next);
    if (delta < tol) break;
  }
  return dot(m.initial, v);
}

double enumerate_policies_value(const mdp::SampledMdp& m) {
  m.validate();
  const std::size_t ns = m.num_states(), na = m.num_actions();
  double work = std::pow(static_cast<double>(na), static_cast<double>(ns));
  if (work > 2e6) throw std::invalid_argument("enumerate_policies_value: instance too large");
  const std::size_t total = static_cast<std::size_t>(work);
  double best = -lp::kInf;
  std::vector<std::size_t> choice(ns, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t x = 0; x < ns; ++x) {
      choice[x] = c % na;
      c /= na;
    }
    // V = r_pi + gamma P_pi V
    Matrix sys(ns, ns);
    std::vector<double> rhs(ns);
    for (std::size_t x = 0; x < ns; ++x) {
      sys(x, x) = 1.0;
      const mdp::CsrMatrix& t = m.transition[choice[x]];
      for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e)
        sys(x, t.col[e]) -= m.discount * t.val[e];
      rhs[x] = m.reward(x, choice[x]);
    }
    const std::vector<double> v = solve_linear(std::move(sys), std::move(rhs));
    best = std::max(best, dot(m.initial, v));
  }
  return best;
}

mdp::SampledMdp random_mdp(const RandomMdpSpec& spec, std::uint64_t seed) {
  if (spec.num_states == 0 || spec.num_actions == 0)
    throw std::invalid_argument("random_mdp: empty spec");
  Rng rng(seed);
  const std::size_t ns = spec.num_states, na = spec.num_actions;
  mdp::SampledMdp m;
  m.discount = spec.gamma;
  for (std::size_t x = 0; x < ns; ++x) m.states.push_back({rng.uniform(), rng.uniform()});
  for (std::size_t u = 0; u < na; ++u) m.actions.push_back("a" + std::to_string(u));

  const std::size_t kernels = spec.conformant ? 1 : na;
  std::vector<Matrix> dense;
  for (std::size_t u = 0; u < kernels; ++u) {
    Matrix rows(ns, ns);
    for (std::size_t x = 0; x < ns; ++x) {
      // at least one target; roughly half the states reachable
      const std::size_t forced = static_cast<std::size_t>(rng.uniform() * ns) % ns;
      for (std::size_t y = 0; y < ns; ++y)
        if (y == forced || rng.uniform() < 0.5) rows(x, y) = 0.05 + rng.uniform();
    }
    dense.push_back(std::move(rows));
  }
  for (std::size_t u = 0; u < na; ++u)
    m.transition.push_back(mdp::make_stochastic_csr(dense[spec.conformant ? 0 : u]));

  m.reward = Matrix(ns, na);
  m.cost = Matrix(ns, na);
  if (spec.conformant) {
    for (std::size_t x = 0; x < ns; ++x) {
      const double r = 0.2 + 0.8 * rng.uniform();
      for (std::size_t u = 0; u < na; ++u) m.reward(x, u) = r;
    }
  } else {
    for (std::size_t x = 0; x < ns; ++x)
      for (std::size_t u = 0; u < na; ++u) m.reward(x, u) = 2.0 * rng.uniform() - 1.0;
  }
  std::vector<double> nu(ns);
  double total = 0.0;
  for (double& v : nu) {
    v = 0.1 + rng.uniform();
    total += v;
  }
  for (double& v : nu) v /= total;
  m.initial = nu;
  if (spec.with_budget) {
    for (std::size_t x = 0; x < ns; ++x)
      for (std::size_t u = 0; u < na; ++u) m.cost(x, u) = rng.uniform();
    // budget = discounted cost of the uniform policy, so the instance is
    // feasible by construction and the row often binds at the optimum
    Matrix sys(ns, ns);
    std::vector<double> rhs(ns, 0.0);
    for (std::size_t x = 0; x < ns; ++x) {
      sys(x, x) = 1.0;
      for (std::size_t u = 0; u < na; ++u) {
        const mdp::CsrMatrix& t = m.transition[u];
        for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e)
          sys(x, t.col[e]) -= spec.gamma * t.val[e] / static_cast<double>(na);
        rhs[x] += m.cost(x, u) / static_cast<double>(na);
      }
    }
    const std::vector<double> vc = solve_linear(std::move(sys), std::move(rhs));
    m.cost_budget = dot(m.initial, vc) * (1.0 + 1e-9);
  }
  m.validate();
  return m;
}

}  // namespace aadp::diagnostics
