#include "aadp/aadp.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace aadp {

const char* to_string(AadpStatus s) {
  switch (s) {
    case AadpStatus::Ok: return "ok";
    case AadpStatus::LpInfeasible: return "lp_infeasible";
    case AadpStatus::LpUnbounded: return "lp_unbounded";
    case AadpStatus::LpNumericalFailure: return "lp_numerical_failure";
    case AadpStatus::DegenerateMeasure: return "degenerate_measure";
  }
  return "unknown";
}

ReducedDualLp build_reduced_dual(const mdp::SampledMdp& m,
                                 const features::FeatureSet& fs,
                                 double epsilon) {
  m.validate();
  const std::size_t ns = m.num_states(), na = m.num_actions();
  fs.validate(ns, na);
  if (epsilon < 0.0) throw std::invalid_argument("build_reduced_dual: epsilon must be >= 0");
  const std::size_t k = fs.k(), l = fs.l();
  const bool budget = m.has_cost_budget();
  const std::size_t cols = l + (budget ? 1 : 0);

  ReducedDualLp out;
  out.k = k;
  out.l = l;
  out.has_budget_column = budget;
  lp::DenseLp& lp = out.problem;
  lp = lp::DenseLp::make(lp::Sense::Min, k, cols);
  for (std::size_t i = 0; i < k; ++i) lp.row_sense[i] = lp::RowSense::GE;
  for (std::size_t j = 0; j < l; ++j) lp.lower[j] = -lp::kInf;  // beta is free
  if (budget) lp.lower[l] = 0.0;

  // next[u] = P(u) Psi: expected next-state psi values
  std::vector<Matrix> next;
  next.reserve(na);
  for (std::size_t u = 0; u < na; ++u) {
    const mdp::CsrMatrix& t = m.transition[u];
    Matrix nu(ns, l);
    for (std::size_t x = 0; x < ns; ++x) {
      auto row = nu.row(x);
      for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e) {
        const double p = t.val[e];
        const auto psi_row = fs.psi.row(t.col[e]);
        for (std::size_t j = 0; j < l; ++j) row[j] += p * psi_row[j];
      }
    }
    next.push_back(std::move(nu));
  }

  // row i: sum_j beta_j sum_{x,u} phi_i(x,u) [psi_j(x) - gamma (P(u) psi_j)(x)]
  //        + omega sum_{x,u} c(x,u) phi_i(x,u)  >=  sum_{x,u} phi_i(x,u) r(x,u)
  for (std::size_t u = 0; u < na; ++u) {
    const Matrix& phi = fs.phi[u];
    for (std::size_t x = 0; x < ns; ++x) {
      const auto phi_row = phi.row(x);
      const auto psi_row = fs.psi.row(x);
      const auto next_row = next[u].row(x);
      const double r = m.reward(x, u);
      const double c = m.cost(x, u);
      for (std::size_t i = 0; i < k; ++i) {
        const double f = phi_row[i];
        if (f == 0.0) continue;
        auto lp_row = lp.a.row(i);
        for (std::size_t j = 0; j < l; ++j)
          lp_row[j] += f * (psi_row[j] - m.discount * next_row[j]);
        if (budget) lp_row[l] += f * c;
        lp.rhs[i] += f * r;
      }
    }
  }
  for (std::size_t j = 0; j < l; ++j) {
    double s = 0.0;
    for (std::size_t x = 0; x < ns; ++x) s += fs.psi(x, j) * m.initial[x];
    lp.objective[j] = s;
  }
  if (budget) lp.objective[l] = m.cost_budget + epsilon;
  return out;
}

AadpResult solve_with_features(const mdp::SampledMdp& m,
                               const features::FeatureSet& fs, double epsilon) {
  AadpResult res;
  res.problem = build_reduced_dual(m, fs, epsilon);
  const lp::LpSolution sol = lp::solve(res.problem.problem);
  res.lp_status = sol.status;
  res.lp_objective = sol.objective;
  res.lp_iterations = sol.iterations;
  switch (sol.status) {
    case lp::SolveStatus::Optimal: break;
    case lp::SolveStatus::Infeasible: res.status = AadpStatus::LpInfeasible; return res;
    case lp::SolveStatus::Unbounded: res.status = AadpStatus::LpUnbounded; return res;
    case lp::SolveStatus::NumericalFailure:
      res.status = AadpStatus::LpNumericalFailure;
      return res;
  }
  res.theta = sol.duals;
  res.beta.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(res.problem.l));
  res.omega = res.problem.has_budget_column ? sol.x.back() : 0.0;

  const std::size_t ns = m.num_states(), na = m.num_actions();
  Matrix mu(ns, na);
  double clipped = 0.0, total = 0.0;
  for (std::size_t u = 0; u < na; ++u) {
    const Matrix& phi = fs.phi[u];
    for (std::size_t x = 0; x < ns; ++x) {
      double v = 0.0;
      const auto row = phi.row(x);
      for (std::size_t i = 0; i < res.theta.size(); ++i)
        v += std::max(res.theta[i], 0.0) * row[i];
      if (v < 0.0) {
        clipped += -v;
        v = 0.0;
      }
      mu(x, u) = v;
      total += v;
    }
  }
  res.clipped_mass = clipped;
  if (total <= 0.0) {
    res.status = AadpStatus::DegenerateMeasure;
    return res;
  }
  for (double& v : mu.data()) v /= total;
  res.policy = mdp::policy_from_measure(mu);
  res.mu.values = std::move(mu);
  res.mu.normalized = true;
  res.status = AadpStatus::Ok;
  return res;
}

AadpResult run_aadp(const mdp::SampledMdp& m, const AadpOptions& options) {
  if (options.k == 0 || options.l == 0)
    throw std::invalid_argument("run_aadp: k and l must be >= 1");
  const double bandwidth =
      options.bandwidth.value_or(features::median_pairwise_distance(m.states));
  const auto fs = features::FeatureSet::random_fourier(
      m.states, m.num_actions(), options.k, options.l, options.style, options.mode,
      bandwidth, options.seed, options.radii);
  return solve_with_features(m, fs, options.epsilon);
}

namespace {

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_result_csv(std::ostream& os, const mdp::SampledMdp& m,
                      const AadpResult& result, const std::string& run_info) {
  os << "# " << run_info << "\n";
  os << "# status=" << to_string(result.status)
     << ",lp_status=" << lp::to_string(result.lp_status)
     << ",lp_objective=" << csv_double(result.lp_objective)
     << ",clipped_mass=" << csv_double(result.clipped_mass) << "\n";
  os << "state_index,state,action,mu,pi\n";
  if (result.status != AadpStatus::Ok) return;
  for (std::size_t x = 0; x < m.num_states(); ++x) {
    std::string state;
    for (std::size_t c = 0; c < m.states[x].size(); ++c) {
      if (c) state += ";";
      state += csv_double(m.states[x][c]);
    }
    for (std::size_t u = 0; u < m.num_actions(); ++u) {
      os << x << ",\"" << state << "\"," << m.actions[u] << ","
         << csv_double(result.mu.values(x, u)) << ","
         << csv_double(result.policy.prob(x, u)) << "\n";
    }
  }
}

}  // namespace aadp
