#pragma once

#include "bvarkit/series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bvarkit::test {

// Simulate y_t = c + sum_k A_k y_{t-k} + noise_sd * e_t, discarding `burn` initial periods.
inline Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& A, const Eigen::VectorXd& c,
                                    double noise_sd, int T, std::uint64_t seed, int burn = 100) {
  const Eigen::Index N = c.size();
  const int d = static_cast<int>(A.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(burn + T, N);
  for (int t = 0; t < burn + T; ++t) {
    Eigen::VectorXd next = c;
    for (int k = 1; k <= d && t - k >= 0; ++k) next += A[k - 1] * y.row(t - k).transpose();
    for (Eigen::Index i = 0; i < N; ++i) next(i) += noise_sd * normal(rng);
    y.row(t) = next.transpose();
  }
  return y.bottomRows(T);
}

inline SeriesPanel make_panel(const Eigen::MatrixXd& values) {
  std::vector<std::string> names, times;
  for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("v" + std::to_string(j));
  for (Eigen::Index t = 0; t < values.rows(); ++t) times.push_back(std::to_string(t + 1));
  return SeriesPanel(std::move(names), std::move(times), values);
}

// Lag-1 coefficients as printed in the published estimation table, rows = equations in
// the order accidents, population, gdp, private vehicles, buses, subway rail, road speed.
inline Eigen::MatrixXd published_lag1_matrix() {
  Eigen::MatrixXd a(7, 7);
  a << 0.66, -0.14, 0.03, 0.06, -0.28, 0.09, 0.76,
       0.08, 0.71, -0.13, 0.63, -0.46, 0.35, 0.11,
       0.11, -0.12, 0.67, 0.28, 0.79, 0.36, 0.45,
      -0.06, 0.50, -0.04, 0.26, 0.28, 0.19, 0.22,
       0.15, 0.14, 0.21, 0.34, -0.02, 0.10, -0.04,
      -0.27, -0.30, 0.37, -0.48, 0.15, 0.17, 0.53,
       0.15, 0.06, -0.04, 0.03, -0.02, 0.05, 0.19;
  return a;
}

enum PublishedVar { kAccidents = 0, kPopulation, kGdp, kPrivateVehicles, kBuses, kSubway, kRoadSpeed };

// A stable VAR(1) with well-separated dynamics used by the recovery and selection tests.
inline Eigen::MatrixXd strong_var1_matrix() {
  Eigen::MatrixXd a(3, 3);
  a << 0.6, 0.2, 0.0,
      -0.2, 0.5, 0.1,
       0.1, 0.0, 0.4;
  return a;
}

}  // namespace bvarkit::test
