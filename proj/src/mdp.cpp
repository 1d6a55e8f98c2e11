#include "aadp/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "aadp/features.hpp"
#include "json.hpp"

namespace aadp::mdp {

std::vector<double> CsrMatrix::tmul(std::span<const double> x) const {
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[col[k]] += val[k] * xi;
  }
  return y;
}

CsrMatrix make_stochastic_csr(const Matrix& rows, double drop_tol) {
  const std::size_t n = rows.rows();
  if (rows.cols() != n) throw std::invalid_argument("make_stochastic_csr: not square");
  CsrMatrix out;
  out.n = n;
  out.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = rows(i, j);
      if (v < 0.0) throw std::invalid_argument("make_stochastic_csr: negative entry");
      sum += v;
    }
    if (sum <= 0.0) throw std::invalid_argument("make_stochastic_csr: zero row");
    // renormalize, drop tiny entries, renormalize once more
    double kept = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = rows(i, j) / sum;
      if (v >= drop_tol) kept += v;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = rows(i, j) / sum;
      if (v >= drop_tol) {
        out.col.push_back(j);
        out.val.push_back(v / kept);
      }
    }
    out.row_ptr[i + 1] = out.col.size();
  }
  return out;
}

bool SampledMdp::has_cost_budget() const {
  return std::isfinite(cost_budget);
}

double SampledMdp::max_abs_reward() const {
  return max_abs(reward.data());
}

void SampledMdp::validate() const {
  const std::size_t ns = num_states(), na = num_actions();
  if (ns == 0 || na == 0) throw std::invalid_argument("SampledMdp: empty state or action set");
  const std::size_t d = states.front().size();
  if (d == 0) throw std::invalid_argument("SampledMdp: zero-dimensional states");
  for (const auto& s : states)
    if (s.size() != d) throw std::invalid_argument("SampledMdp: ragged state vectors");
  if (transition.size() != na) throw std::invalid_argument("SampledMdp: transition count");
  for (const auto& t : transition) {
    if (t.n != ns) throw std::invalid_argument("SampledMdp: transition size");
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t k = t.row_ptr[i]; k < t.row_ptr[i + 1]; ++k) {
        if (t.val[k] < 0.0) throw std::invalid_argument("SampledMdp: negative transition");
        if (t.col[k] >= ns) throw std::invalid_argument("SampledMdp: column out of range");
      }
      if (std::abs(t.row_sum(i) - 1.0) > 1e-9)
        throw std::invalid_argument("SampledMdp: transition row does not sum to 1");
    }
  }
  if (reward.rows() != ns || reward.cols() != na)
    throw std::invalid_argument("SampledMdp: reward shape");
  if (cost.rows() != ns || cost.cols() != na)
    throw std::invalid_argument("SampledMdp: cost shape");
  if (!(discount > 0.0 && discount < 1.0))
    throw std::invalid_argument("SampledMdp: discount must be in (0,1)");
  if (initial.size() != ns) throw std::invalid_argument("SampledMdp: initial size");
  double total = 0.0;
  for (double v : initial) {
    if (v < 0.0) throw std::invalid_argument("SampledMdp: negative initial mass");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("SampledMdp: initial distribution does not sum to 1");
}

double OccupationMeasure::total() const {
  double s = 0.0;
  for (double v : values.data()) s += v;
  return s;
}

double OccupationMeasure::weighted_total(const Matrix& weight) const {
  if (weight.rows() != values.rows() || weight.cols() != values.cols())
    throw std::invalid_argument("OccupationMeasure: weight shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < values.rows(); ++i)
    s += dot(values.row(i), weight.row(i));
  return s;
}

void StochasticPolicy::validate() const {
  for (std::size_t x = 0; x < prob.rows(); ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < prob.cols(); ++u) {
      const double p = prob(x, u);
      if (p < -1e-12 || p > 1.0 + 1e-12)
        throw std::invalid_argument("StochasticPolicy: entry outside [0,1]");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument("StochasticPolicy: row does not sum to 1");
  }
}

StochasticPolicy StochasticPolicy::uniform(std::size_t states, std::size_t actions) {
  StochasticPolicy p;
  p.prob = Matrix(states, actions, 1.0 / static_cast<double>(actions));
  return p;
}

StochasticPolicy StochasticPolicy::pure(std::size_t states, std::size_t actions,
                                        std::size_t action) {
  StochasticPolicy p;
  p.prob = Matrix(states, actions, 0.0);
  for (std::size_t x = 0; x < states; ++x) p.prob(x, action) = 1.0;
  return p;
}

lp::DenseLp build_exact_lp(const SampledMdp& mdp) {
  mdp.validate();
  const std::size_t ns = mdp.num_states(), na = mdp.num_actions();
  const bool budget = mdp.has_cost_budget();
  const std::size_t rows = ns + (budget ? 1 : 0);
  lp::DenseLp out = lp::DenseLp::make(lp::Sense::Max, rows, ns * na);

  for (std::size_t x = 0; x < ns; ++x) {
    out.row_sense[x] = lp::RowSense::EQ;
    out.rhs[x] = mdp.initial[x];
    for (std::size_t u = 0; u < na; ++u) out.a(x, x * na + u) = 1.0;
  }
  // inflow: mass arriving at row state t.col[k] from (x, u)
  for (std::size_t u = 0; u < na; ++u) {
    const CsrMatrix& t = mdp.transition[u];
    for (std::size_t x = 0; x < ns; ++x) {
      for (std::size_t k = t.row_ptr[x]; k < t.row_ptr[x + 1]; ++k)
        out.a(t.col[k], x * na + u) -= mdp.discount * t.val[k];
    }
  }
  for (std::size_t x = 0; x < ns; ++x)
    for (std::size_t u = 0; u < na; ++u)
      out.objective[x * na + u] = mdp.reward(x, u);
  if (budget) {
    out.row_sense[ns] = lp::RowSense::LE;
    out.rhs[ns] = mdp.cost_budget;
    for (std::size_t x = 0; x < ns; ++x)
      for (std::size_t u = 0; u < na; ++u) out.a(ns, x * na + u) = mdp.cost(x, u);
  }
  return out;
}

lp::DenseLp build_reduced_primal_lp(const SampledMdp& mdp,
                                    const features::FeatureSet& phi) {
  mdp.validate();
  const std::size_t ns = mdp.num_states(), na = mdp.num_actions();
  phi.validate(ns, na);
  const std::size_t k = phi.k();
  if (k == 0) throw std::invalid_argument("build_reduced_primal_lp: no basis columns");
  const bool budget = mdp.has_cost_budget();
  const std::size_t rows = ns + (budget ? 1 : 0);
  lp::DenseLp out = lp::DenseLp::make(lp::Sense::Max, rows, k);

  // flow-balance coefficient of theta_i in row x:
  //   sum_u phi_i(x,u) - gamma * sum_{x',u'} P(u')[x' -> x] phi_i(x',u')
  for (std::size_t x = 0; x < ns; ++x) {
    out.row_sense[x] = lp::RowSense::EQ;
    out.rhs[x] = mdp.initial[x];
    for (std::size_t u = 0; u < na; ++u)
      for (std::size_t i = 0; i < k; ++i) out.a(x, i) += phi.phi[u](x, i);
  }
  for (std::size_t u = 0; u < na; ++u) {
    const CsrMatrix& t = mdp.transition[u];
    for (std::size_t x = 0; x < ns; ++x) {
      for (std::size_t e = t.row_ptr[x]; e < t.row_ptr[x + 1]; ++e) {
        const double w = mdp.discount * t.val[e];
        const std::size_t dest = t.col[e];
        for (std::size_t i = 0; i < k; ++i) out.a(dest, i) -= w * phi.phi[u](x, i);
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    double r = 0.0, c = 0.0;
    for (std::size_t u = 0; u < na; ++u)
      for (std::size_t x = 0; x < ns; ++x) {
        r += phi.phi[u](x, i) * mdp.reward(x, u);
        c += phi.phi[u](x, i) * mdp.cost(x, u);
      }
    out.objective[i] = r;
    if (budget) out.a(ns, i) = c;
  }
  if (budget) {
    out.row_sense[ns] = lp::RowSense::LE;
    out.rhs[ns] = mdp.cost_budget;
  }
  return out;
}

OccupationMeasure occupancy_of_policy(const SampledMdp& mdp,
                                      const StochasticPolicy& policy,
                                      std::size_t horizon) {
  mdp.validate();
  policy.validate();
  const std::size_t ns = mdp.num_states(), na = mdp.num_actions();
  if (policy.prob.rows() != ns || policy.prob.cols() != na)
    throw std::invalid_argument("occupancy_of_policy: policy shape mismatch");
  OccupationMeasure out;
  out.values = Matrix(ns, na);
  std::vector<double> dist = mdp.initial;
  std::vector<double> weighted(ns, 0.0);
  double disc = 1.0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    for (std::size_t x = 0; x < ns; ++x) {
      if (dist[x] == 0.0) continue;
      for (std::size_t u = 0; u < na; ++u)
        out.values(x, u) += disc * dist[x] * policy.prob(x, u);
    }
    if (t == horizon) break;
    std::vector<double> next(ns, 0.0);
    for (std::size_t u = 0; u < na; ++u) {
      for (std::size_t x = 0; x < ns; ++x) weighted[x] = dist[x] * policy.prob(x, u);
      const auto pushed = mdp.transition[u].tmul(weighted);
      for (std::size_t x = 0; x < ns; ++x) next[x] += pushed[x];
    }
    dist = std::move(next);
    disc *= mdp.discount;
  }
  return out;
}

StochasticPolicy policy_from_measure(const Matrix& mu) {
  StochasticPolicy p;
  p.prob = Matrix(mu.rows(), mu.cols());
  for (std::size_t x = 0; x < mu.rows(); ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < mu.cols(); ++u) s += std::max(mu(x, u), 0.0);
    if (s > 0.0) {
      for (std::size_t u = 0; u < mu.cols(); ++u)
        p.prob(x, u) = std::max(mu(x, u), 0.0) / s;
    } else {
      for (std::size_t u = 0; u < mu.cols(); ++u)
        p.prob(x, u) = 1.0 / static_cast<double>(mu.cols());
    }
  }
  return p;
}

std::size_t truncation_horizon(double gamma, double scale, double tol) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("truncation_horizon: gamma");
  if (scale <= 0.0) scale = 1.0;
  const double h = std::log(tol / scale) / std::log(gamma);
  if (h <= 0.0) return 1;
  return static_cast<std::size_t>(std::min(h + 1.0, 5e6));
}

Matrix measure_from_flat(const SampledMdp& mdp, const std::vector<double>& x) {
  const std::size_t ns = mdp.num_states(), na = mdp.num_actions();
  if (x.size() != ns * na) throw std::invalid_argument("measure_from_flat: size mismatch");
  Matrix m(ns, na);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t u = 0; u < na; ++u) m(s, u) = x[s * na + u];
  return m;
}

namespace {

nlohmann::json csr_to_json(const CsrMatrix& m) {
  return {{"row_ptr", m.row_ptr}, {"col_idx", m.col}, {"values", m.val}};
}

CsrMatrix csr_from_json(const nlohmann::json& j, std::size_t n) {
  CsrMatrix m;
  m.n = n;
  m.row_ptr = j.at("row_ptr").get<std::vector<std::size_t>>();
  m.col = j.at("col_idx").get<std::vector<std::size_t>>();
  m.val = j.at("values").get<std::vector<double>>();
  if (m.row_ptr.size() != n + 1 || m.col.size() != m.val.size())
    throw std::runtime_error("mdp json: malformed CSR block");
  return m;
}

std::vector<std::vector<double>> table_to_rows(const Matrix& t) {
  std::vector<std::vector<double>> rows(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i)
    rows[i].assign(t.row(i).begin(), t.row(i).end());
  return rows;
}

Matrix table_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix t(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != t.cols()) throw std::runtime_error("mdp json: ragged table");
    for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = rows[i][j];
  }
  return t;
}

}  // namespace

std::string to_json(const SampledMdp& mdp) {
  nlohmann::json j;
  j["states"] = mdp.states;
  j["actions"] = mdp.actions;
  j["discount"] = mdp.discount;
  j["initial"] = mdp.initial;
  if (std::isfinite(mdp.cost_budget)) j["cost_budget"] = mdp.cost_budget;
  j["reward"] = table_to_rows(mdp.reward);
  j["cost"] = table_to_rows(mdp.cost);
  nlohmann::json tr;
  for (std::size_t u = 0; u < mdp.num_actions(); ++u)
    tr[mdp.actions[u]] = csr_to_json(mdp.transition[u]);
  j["transition"] = tr;
  return j.dump(2);
}

SampledMdp mdp_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SampledMdp mdp;
  mdp.states = j.at("states").get<std::vector<std::vector<double>>>();
  mdp.actions = j.at("actions").get<std::vector<std::string>>();
  mdp.discount = j.at("discount").get<double>();
  mdp.initial = j.at("initial").get<std::vector<double>>();
  mdp.cost_budget = j.contains("cost_budget") ? j.at("cost_budget").get<double>() : lp::kInf;
  mdp.reward = table_from_rows(j.at("reward").get<std::vector<std::vector<double>>>());
  if (j.contains("cost")) {
    mdp.cost = table_from_rows(j.at("cost").get<std::vector<std::vector<double>>>());
  } else {
    mdp.cost = Matrix(mdp.states.size(), mdp.actions.size());
  }
  const auto& tr = j.at("transition");
  for (const auto& name : mdp.actions) {
    if (!tr.contains(name))
      throw std::runtime_error("mdp json: missing transition for action " + name);
    mdp.transition.push_back(csr_from_json(tr.at(name), mdp.states.size()));
  }
  mdp.validate();
  return mdp;
}

SampledMdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mdp file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return mdp_from_json(ss.str());
}

void save_mdp(const SampledMdp& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mdp file: " + path);
  out << to_json(mdp) << "\n";
}

}  // namespace aadp::mdp
