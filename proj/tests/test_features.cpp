#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aadp/features.hpp"
#include "aadp/rng.hpp"
#include "oracles.hpp"

using namespace aadp;
using namespace aadp::features;

TEST_CASE("hadamard base cases") {
  auto h0 = hadamard(0);
  REQUIRE(h0.size() == 1);
  CHECK(h0[0][0] == 1);
  auto h1 = hadamard(1);
  CHECK(h1[0] == std::vector<int>{1, 1});
  CHECK(h1[1] == std::vector<int>{1, -1});
  CHECK_THROWS_AS(hadamard(17), std::invalid_argument);
}

TEST_CASE("hadamard orthogonality H H^T = 2^k I") {
  for (int order : {3, 6}) {
    auto h = hadamard(order);
    const std::size_t n = h.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        long long s = 0;
        for (std::size_t c = 0; c < n; ++c) s += static_cast<long long>(h[i][c]) * h[j][c];
        CHECK(s == (i == j ? static_cast<long long>(n) : 0));
      }
    }
  }
}

TEST_CASE("gaussian frequencies have the right first moments") {
  auto f = generate_frequencies(2, 10000, FrequencyMode::Gaussian, 1.0, 3);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < f.count(); ++i) mean += f.rows(i, c);
    mean /= static_cast<double>(f.count());
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(10000.0));
  }
}

TEST_CASE("hadamard-rademacher rows are orthogonal when radii are off") {
  auto f = generate_frequencies(4, 4, FrequencyMode::HadamardRademacher, 1.0, 5,
                                /*radii=*/false);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(dot(f.rows.row(i), f.rows.row(j)) == 0.0);
}

TEST_CASE("bandwidth rescales frequencies exactly") {
  auto f1 = generate_frequencies(3, 32, FrequencyMode::Gaussian, 1.0, 11);
  auto f2 = generate_frequencies(3, 32, FrequencyMode::Gaussian, 2.0, 11);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(f2.rows(i, j) == f1.rows(i, j) / 2.0);
}

TEST_CASE("identical seeds give bit-identical frequencies") {
  for (auto mode : {FrequencyMode::Gaussian, FrequencyMode::HadamardRademacher}) {
    auto f1 = generate_frequencies(5, 64, mode, 1.5, 77);
    auto f2 = generate_frequencies(5, 64, mode, 1.5, 77);
    CHECK(f1.rows.data() == f2.rows.data());
  }
}

TEST_CASE("hadamard-rademacher row norms match chi moments with radii on") {
  const std::size_t d = 4, m = 1024;
  auto f = generate_frequencies(d, m, FrequencyMode::HadamardRademacher, 1.0, 13);
  double mean_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < f.padded_dim; ++j) n2 += f.rows(i, j) * f.rows(i, j);
    mean_norm += std::sqrt(n2);
  }
  mean_norm /= static_cast<double>(m);
  // E chi(4) = sqrt(2) Gamma(2.5) / Gamma(2)
  const double expected = std::sqrt(2.0) * std::tgamma(2.5) / std::tgamma(2.0);
  CHECK(std::abs(mean_norm - expected) / expected <= 0.05);
}

TEST_CASE("paired feature map has unit norm, cos-only maps zero to ones") {
  auto f = generate_frequencies(3, 16, FrequencyMode::Gaussian, 1.0, 9);
  const std::vector<double> x = {0.4, -1.2, 2.0};
  auto paired = feature_map(x, f, FeatureStyle::PairedCosSin);
  REQUIRE(paired.size() == 32);
  CHECK(dot(paired, paired) == doctest::Approx(1.0).epsilon(1e-13));

  const std::vector<double> zero = {0.0, 0.0, 0.0};
  auto cos_only = feature_map(zero, f, FeatureStyle::CosOnly);
  REQUIRE(cos_only.size() == 16);
  for (double v : cos_only) CHECK(v == 1.0);
}

TEST_CASE("feature map rejects dimension mismatch") {
  auto f = generate_frequencies(3, 4, FrequencyMode::Gaussian, 1.0, 9);
  const std::vector<double> x = {1.0, 2.0};
  CHECK_THROWS_AS(feature_map(x, f, FeatureStyle::CosOnly), std::invalid_argument);
}

TEST_CASE("kernel estimate at x = y is one and bounded by one in paired style") {
  auto f = generate_frequencies(2, 64, FrequencyMode::Gaussian, 1.0, 17);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x = {4.0 * rng.uniform(), 4.0 * rng.uniform()};
    std::vector<double> y = {40.0 * rng.uniform(), 40.0 * rng.uniform()};
    CHECK(kernel_estimate(x, x, f, FeatureStyle::PairedCosSin) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(kernel_estimate(x, y, f, FeatureStyle::PairedCosSin)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("paired kernel approximates the RBF kernel") {
  const double sigma = 1.0;
  auto f = generate_frequencies(3, 2048, FrequencyMode::Gaussian, sigma, 23);
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(3), y(3);
    for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
    for (auto& v : y) v = 2.0 * rng.uniform() - 1.0;
    const double est = kernel_estimate(x, y, f, FeatureStyle::PairedCosSin);
    CHECK(std::abs(est - oracles::rbf_kernel(x, y, sigma)) <= 0.1);
  }
}

TEST_CASE("kernel error decreases with the number of features") {
  // median over 20 seeds of the median abs error over 100 pairs, per m
  const double sigma = 1.0;
  std::vector<double> med_by_m;
  for (std::size_t m : {64u, 256u, 1024u}) {
    std::vector<double> seed_medians;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto f = generate_frequencies(3, m, FrequencyMode::Gaussian, sigma, 1000 + seed);
      Rng rng(500 + seed);
      std::vector<double> errs;
      for (int p = 0; p < 100; ++p) {
        std::vector<double> x(3), y(3);
        for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
        for (auto& v : y) v = 2.0 * rng.uniform() - 1.0;
        errs.push_back(std::abs(kernel_estimate(x, y, f, FeatureStyle::PairedCosSin) -
                                oracles::rbf_kernel(x, y, sigma)));
      }
      std::nth_element(errs.begin(), errs.begin() + 50, errs.end());
      seed_medians.push_back(errs[50]);
    }
    std::nth_element(seed_medians.begin(), seed_medians.begin() + 10, seed_medians.end());
    med_by_m.push_back(seed_medians[10]);
  }
  CHECK(med_by_m[0] > med_by_m[1]);
  CHECK(med_by_m[1] > med_by_m[2]);
  CHECK(med_by_m[2] <= 0.1);
}

TEST_CASE("paired gram matrices are positive semidefinite") {
  auto f = generate_frequencies(2, 128, FrequencyMode::Gaussian, 1.0, 31);
  Rng rng(12);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({3.0 * rng.uniform(), 3.0 * rng.uniform()});
  Matrix gram(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      gram(i, j) = kernel_estimate(pts[i], pts[j], f, FeatureStyle::PairedCosSin);
  CHECK(oracles::min_eigenvalue_symmetric(gram) >= -1e-10);
}

TEST_CASE("random fourier feature sets evaluate consistently") {
  std::vector<std::vector<double>> states = {{0.0, 0.0}, {1.0, 0.5}, {2.0, -1.0}};
  auto fs = FeatureSet::random_fourier(states, 2, 8, 6, FeatureStyle::CosOnly,
                                       FrequencyMode::HadamardRademacher, 1.0, 42);
  fs.validate(3, 2);
  CHECK(fs.k() == 8);
  CHECK(fs.l() == 6);
  // per-action frequencies are independent
  CHECK(fs.phi_freq[0].rows.data() != fs.phi_freq[1].rows.data());
  // table entries match a direct feature_map evaluation
  auto direct = feature_map(states[1], fs.phi_freq[1], FeatureStyle::CosOnly);
  for (std::size_t i = 0; i < 8; ++i) CHECK(fs.phi[1](1, i) == direct[i]);
  for (double v : fs.phi[0].data()) CHECK(std::abs(v) <= 1.0);

  CHECK_THROWS_AS(FeatureSet::random_fourier(states, 2, 7, 6, FeatureStyle::PairedCosSin,
                                             FrequencyMode::Gaussian, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("frequency matrix replays exactly from its json parameters") {
  auto f = generate_frequencies(3, 32, FrequencyMode::HadamardRademacher, 2.5, 123);
  auto f2 = frequency_matrix_from_json(f.to_json());
  CHECK(f2.rows.data() == f.rows.data());
  CHECK(f2.bandwidth == f.bandwidth);
  CHECK(f2.seed == f.seed);
}

TEST_CASE("median pairwise distance") {
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {2.0}};
  // distances: 1, 1, 2 -> median 1
  CHECK(median_pairwise_distance(pts) == doctest::Approx(1.0));
  CHECK(median_pairwise_distance({{5.0}}) == 1.0);
  CHECK(median_pairwise_distance({{1.0}, {1.0}, {1.0}}) == 1.0);
}
