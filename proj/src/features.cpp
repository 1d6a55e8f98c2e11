#include "aadp/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "aadp/rng.hpp"
#include "json.hpp"

namespace aadp::features {

FrequencyMode mode_from_string(const std::string& s) {
  if (s == "gaussian") return FrequencyMode::Gaussian;
  if (s == "hadamard_rademacher") return FrequencyMode::HadamardRademacher;
  throw std::invalid_argument("unknown frequency mode: " + s);
}

FeatureStyle style_from_string(const std::string& s) {
  if (s == "cos_only") return FeatureStyle::CosOnly;
  if (s == "paired_cos_sin") return FeatureStyle::PairedCosSin;
  throw std::invalid_argument("unknown feature style: " + s);
}

const char* to_string(FrequencyMode m) {
  return m == FrequencyMode::Gaussian ? "gaussian" : "hadamard_rademacher";
}

const char* to_string(FeatureStyle s) {
  return s == FeatureStyle::CosOnly ? "cos_only" : "paired_cos_sin";
}

std::vector<std::vector<int>> hadamard(int order) {
  if (order < 0) throw std::invalid_argument("hadamard: negative order");
  if (order > 16) throw std::invalid_argument("hadamard: order above 2^16 cap");
  const std::size_t n = std::size_t{1} << order;
  std::vector<std::vector<int>> h(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h[i][j] = (std::popcount(i & j) % 2 == 0) ? 1 : -1;
  return h;
}

namespace {

std::size_t next_pow2(std::size_t d) {
  std::size_t p = 1;
  while (p < d) p <<= 1;
  return p;
}

int hadamard_entry(std::size_t i, std::size_t j) {
  return (std::popcount(i & j) % 2 == 0) ? 1 : -1;
}

}  // namespace

FrequencyMatrix generate_frequencies(std::size_t dim, std::size_t m,
                                     FrequencyMode mode, double bandwidth,
                                     std::uint64_t seed, bool radii) {
  if (dim == 0) throw std::invalid_argument("generate_frequencies: dim must be >= 1");
  if (m == 0) throw std::invalid_argument("generate_frequencies: m must be >= 1");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("generate_frequencies: bandwidth must be > 0");
  FrequencyMatrix f;
  f.mode = mode;
  f.dim = dim;
  f.bandwidth = bandwidth;
  f.seed = seed;
  f.radii = radii;
  Rng rng(seed);
  if (mode == FrequencyMode::Gaussian) {
    f.padded_dim = dim;
    f.rows = Matrix(m, dim);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < dim; ++j) f.rows(i, j) = rng.normal() / bandwidth;
  } else {
    const std::size_t dp = next_pow2(dim);
    f.padded_dim = dp;
    f.rows = Matrix(m, dp);
    const double unit = 1.0 / std::sqrt(static_cast<double>(dp));
    std::vector<int> signs(dp);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t block_row = r % dp;
      if (block_row == 0) {
        for (std::size_t j = 0; j < dp; ++j) signs[j] = rng.rademacher();
      }
      const double radius = radii ? rng.chi(dim) : 1.0;
      const double scale = unit * radius / bandwidth;
      for (std::size_t j = 0; j < dp; ++j)
        f.rows(r, j) = scale * hadamard_entry(block_row, j) * signs[j];
    }
  }
  return f;
}

std::vector<double> feature_map(std::span<const double> x,
                                const FrequencyMatrix& freq, FeatureStyle style) {
  if (x.size() != freq.dim)
    throw std::invalid_argument("feature_map: input dimension mismatch");
  const std::size_t m = freq.count();
  std::vector<double> out(style == FeatureStyle::CosOnly ? m : 2 * m);
  const double scale = style == FeatureStyle::CosOnly
                           ? 1.0
                           : 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    // zero padding: coordinates beyond dim contribute nothing
    double z = 0.0;
    const auto row = freq.rows.row(i);
    for (std::size_t j = 0; j < freq.dim; ++j) z += row[j] * x[j];
    if (style == FeatureStyle::CosOnly) {
      out[i] = std::cos(z);
    } else {
      out[2 * i] = scale * std::cos(z);
      out[2 * i + 1] = scale * std::sin(z);
    }
  }
  return out;
}

double kernel_estimate(std::span<const double> x, std::span<const double> y,
                       const FrequencyMatrix& freq, FeatureStyle style) {
  const auto fx = feature_map(x, freq, style);
  const auto fy = feature_map(y, freq, style);
  return dot(fx, fy);
}

void FeatureSet::validate(std::size_t states, std::size_t actions) const {
  if (phi.size() != actions)
    throw std::invalid_argument("FeatureSet: one phi table per action required");
  const std::size_t kk = k();
  if (kk == 0) throw std::invalid_argument("FeatureSet: k must be >= 1");
  for (const auto& p : phi)
    if (p.rows() != states || p.cols() != kk)
      throw std::invalid_argument("FeatureSet: phi table shape mismatch");
  if (psi.rows() != states || psi.cols() == 0)
    throw std::invalid_argument("FeatureSet: psi table shape mismatch");
  for (const auto& p : phi)
    for (double v : p.data())
      if (!std::isfinite(v)) throw std::invalid_argument("FeatureSet: non-finite phi entry");
  for (double v : psi.data())
    if (!std::isfinite(v)) throw std::invalid_argument("FeatureSet: non-finite psi entry");
}

FeatureSet FeatureSet::random_fourier(const std::vector<std::vector<double>>& states,
                                      std::size_t num_actions, std::size_t k,
                                      std::size_t l, FeatureStyle style,
                                      FrequencyMode mode, double bandwidth,
                                      std::uint64_t seed, bool radii) {
  if (states.empty()) throw std::invalid_argument("random_fourier: no states");
  if (k == 0 || l == 0) throw std::invalid_argument("random_fourier: k and l must be >= 1");
  if (style == FeatureStyle::PairedCosSin && (k % 2 != 0 || l % 2 != 0))
    throw std::invalid_argument("random_fourier: paired style needs even k and l");
  const std::size_t dim = states.front().size();
  const std::size_t m_phi = style == FeatureStyle::CosOnly ? k : k / 2;
  const std::size_t m_psi = style == FeatureStyle::CosOnly ? l : l / 2;
  FeatureSet fs;
  fs.style = style;
  for (std::size_t u = 0; u < num_actions; ++u)
    fs.phi_freq.push_back(
        generate_frequencies(dim, m_phi, mode, bandwidth, mix_seed(seed, u), radii));
  fs.psi_freq =
      generate_frequencies(dim, m_psi, mode, bandwidth, mix_seed(seed, num_actions), radii);

  const std::size_t ns = states.size();
  for (std::size_t u = 0; u < num_actions; ++u) {
    Matrix t(ns, k);
    for (std::size_t x = 0; x < ns; ++x) {
      const auto v = feature_map(states[x], fs.phi_freq[u], style);
      std::copy(v.begin(), v.end(), t.row(x).begin());
    }
    fs.phi.push_back(std::move(t));
  }
  fs.psi = Matrix(ns, l);
  for (std::size_t x = 0; x < ns; ++x) {
    const auto v = feature_map(states[x], *fs.psi_freq, style);
    std::copy(v.begin(), v.end(), fs.psi.row(x).begin());
  }
  return fs;
}

FeatureSet FeatureSet::indicator(std::size_t states, std::size_t actions) {
  FeatureSet fs;
  fs.style = FeatureStyle::CosOnly;
  for (std::size_t u = 0; u < actions; ++u) {
    Matrix t(states, states * actions);
    for (std::size_t x = 0; x < states; ++x) t(x, x * actions + u) = 1.0;
    fs.phi.push_back(std::move(t));
  }
  fs.psi = Matrix::identity(states);
  return fs;
}

double median_pairwise_distance(const std::vector<std::vector<double>>& points) {
  if (points.size() < 2) return 1.0;
  std::vector<const std::vector<double>*> pts;
  const std::size_t cap = 2048;
  const std::size_t stride = points.size() > cap ? points.size() / cap + 1 : 1;
  for (std::size_t i = 0; i < points.size(); i += stride) pts.push_back(&points[i]);
  std::vector<double> dists;
  dists.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < pts[i]->size(); ++c) {
        const double d = (*pts[i])[c] - (*pts[j])[c];
        d2 += d * d;
      }
      dists.push_back(std::sqrt(d2));
    }
  }
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<long>(mid), dists.end());
  const double med = dists[mid];
  return med > 0.0 ? med : 1.0;
}

std::string FrequencyMatrix::to_json() const {
  nlohmann::json j;
  j["mode"] = features::to_string(mode);
  j["dim"] = dim;
  j["m"] = count();
  j["bandwidth"] = bandwidth;
  j["seed"] = seed;
  j["radii"] = radii;
  return j.dump();
}

FrequencyMatrix frequency_matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return generate_frequencies(j.at("dim").get<std::size_t>(), j.at("m").get<std::size_t>(),
                              mode_from_string(j.at("mode").get<std::string>()),
                              j.at("bandwidth").get<double>(),
                              j.at("seed").get<std::uint64_t>(), j.at("radii").get<bool>());
}

}  // namespace aadp::features
