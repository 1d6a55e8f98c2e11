#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aadp/linalg.hpp"

namespace aadp::features {

enum class FrequencyMode { Gaussian, HadamardRademacher };
enum class FeatureStyle { CosOnly, PairedCosSin };

FrequencyMode mode_from_string(const std::string& s);
FeatureStyle style_from_string(const std::string& s);
const char* to_string(FrequencyMode m);
const char* to_string(FeatureStyle s);

/// Sylvester-Hadamard matrix of size 2^order x 2^order with entries +-1;
/// H H^T = 2^order I exactly in integer arithmetic. order is capped at 16.
std::vector<std::vector<int>> hadamard(int order);

/// Random projection frequencies for a shift-invariant (RBF) kernel.
/// Gaussian mode draws i.i.d. N(0, I / bandwidth^2) rows. Hadamard-Rademacher
/// mode uses rows of (H D) / sqrt(d_pad), one fresh +-1 diagonal per block of
/// d_pad rows, optionally scaled by independent chi(dim) radii so row norms
/// match Gaussian rows, then divided by the bandwidth. Inputs of dimension
/// dim are zero-padded to padded_dim before projecting.
struct FrequencyMatrix {
  FrequencyMode mode = FrequencyMode::Gaussian;
  std::size_t dim = 0;
  std::size_t padded_dim = 0;
  double bandwidth = 1.0;
  std::uint64_t seed = 0;
  bool radii = true;
  Matrix rows;  // m x padded_dim

  std::size_t count() const { return rows.rows(); }
  std::string to_json() const;
};

FrequencyMatrix frequency_matrix_from_json(const std::string& text);

/// Deterministic for identical arguments: draw order is fixed as documented
/// on FrequencyMatrix, and the bandwidth only rescales the draws.
FrequencyMatrix generate_frequencies(std::size_t dim, std::size_t m,
                                     FrequencyMode mode, double bandwidth,
                                     std::uint64_t seed, bool radii = true);

/// CosOnly: [cos(w_i'x)]_{i=1..m}, unscaled. PairedCosSin:
/// (1/sqrt(m)) [cos(w_i'x), sin(w_i'x)]_{i=1..m}, a 2m-vector with unit norm.
std::vector<double> feature_map(std::span<const double> x,
                                const FrequencyMatrix& freq, FeatureStyle style);

/// Inner product of the two feature vectors; in paired style this estimates
/// the RBF kernel exp(-||x-y||^2 / (2 bandwidth^2)).
double kernel_estimate(std::span<const double> x, std::span<const double> y,
                       const FrequencyMatrix& freq, FeatureStyle style);

/// Evaluated bases: phi[u](x, i) are the k state-action features (one
/// frequency matrix per action) and psi(x, j) the l state features.
struct FeatureSet {
  FeatureStyle style = FeatureStyle::CosOnly;
  std::vector<Matrix> phi;  // per action: |S'| x k
  Matrix psi;               // |S'| x l
  std::vector<FrequencyMatrix> phi_freq;  // empty for handmade bases
  std::optional<FrequencyMatrix> psi_freq;

  std::size_t k() const { return phi.empty() ? 0 : phi.front().cols(); }
  std::size_t l() const { return psi.cols(); }
  std::size_t num_actions() const { return phi.size(); }
  std::size_t num_states() const { return psi.rows(); }

  /// Throws if the tables do not cover states x actions consistently.
  void validate(std::size_t states, std::size_t actions) const;

  /// Random-Fourier bases per the kernelized algorithm: independent
  /// frequencies per action for phi plus one matrix for psi. In paired style
  /// k and l must be even. Seeds are derived from `seed` per matrix.
  static FeatureSet random_fourier(const std::vector<std::vector<double>>& states,
                                   std::size_t num_actions, std::size_t k,
                                   std::size_t l, FeatureStyle style,
                                   FrequencyMode mode, double bandwidth,
                                   std::uint64_t seed, bool radii = true);

  /// Indicator bases: k = |S'| * |U| state-action indicators and l = |S'|
  /// state indicators. Makes the reduced problems collapse to the exact LP.
  static FeatureSet indicator(std::size_t states, std::size_t actions);
};

/// Median pairwise Euclidean distance, the default kernel bandwidth. For more
/// than 2048 points a deterministic stride subsample is used. Returns 1 when
/// the median vanishes.
double median_pairwise_distance(const std::vector<std::vector<double>>& points);

}  // namespace aadp::features
