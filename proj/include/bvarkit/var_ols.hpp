#pragma once

#include "bvarkit/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace bvarkit {

struct VarSpec {
  int lag_order = 1;
  bool constant = true;
  std::vector<std::string> variable_order;
};

struct EquationFit {
  double r_squared = 0.0;
  double se_equation = 0.0;
};

enum class EstimateSource { ols, bvar_posterior_mean };

[[nodiscard]] const char* to_string(EstimateSource s) noexcept;

/**
 * Reduced-form VAR coefficients and fit summary.
 *
 * `A[k-1](i, j)` is the effect of variable j at lag k in equation i. `Sigma`
 * uses the maximum-likelihood divisor `T_eff`. `logL` is absent when Sigma is
 * singular. `per_equation` is empty when the design leaves no residual degrees
 * of freedom (T_eff <= K).
 */
struct VarEstimate {
  VarSpec spec;
  std::vector<Eigen::MatrixXd> A;
  Eigen::VectorXd c;
  Eigen::MatrixXd Sigma;
  int T_eff = 0;
  std::optional<double> logL;
  std::vector<EquationFit> per_equation;
  EstimateSource source = EstimateSource::ols;

  [[nodiscard]] int num_vars() const noexcept { return static_cast<int>(c.size()); }
  [[nodiscard]] int lag_order() const noexcept { return static_cast<int>(A.size()); }
};

/// Residual standard deviations of per-variable univariate AR fits.
struct ArSigmaVector {
  Eigen::VectorXd s;
};

/// K x N coefficient matrix (regressor x equation) in the design's layout.
[[nodiscard]] Eigen::MatrixXd coefficient_matrix(const VarEstimate& est,
                                                 const std::vector<Regressor>& layout);

/// Unpack a K x N coefficient matrix into A_k and c.
void unpack_coefficients(const Eigen::MatrixXd& B, const std::vector<Regressor>& layout, int num_vars,
                         int lag_order, std::vector<Eigen::MatrixXd>& A, Eigen::VectorXd& c);

/// Relative singular-value cutoff below which a design is rejected as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/**
 * Equation-wise least squares. Throws Errc::singular_design when the smallest
 * singular value of X falls below kRankTolerance times the largest.
 */
[[nodiscard]] VarEstimate fit_ols(const DesignMatrices& design, const VarSpec& spec);

/// Least-squares coefficients (K x N) with the same rank check as fit_ols.
[[nodiscard]] Eigen::MatrixXd least_squares(const DesignMatrices& design);

/// Gaussian log-likelihood at the ML covariance: -(T/2)(N(1 + ln 2pi) + ln det Sigma).
[[nodiscard]] double log_likelihood(const VarEstimate& est);
[[nodiscard]] double log_likelihood(const Eigen::MatrixXd& sigma, int T_eff);

/// ln det of a symmetric positive definite matrix; throws degenerate_covariance otherwise.
[[nodiscard]] double log_det_spd(const Eigen::MatrixXd& sigma);

[[nodiscard]] std::vector<EquationFit> fit_stats(const DesignMatrices& design, const VarEstimate& est);

[[nodiscard]] ArSigmaVector univariate_ar_sigmas(const SeriesPanel& panel, int lag_order, bool constant,
                                                 std::optional<int> common_max_lag = std::nullopt);

}  // namespace bvarkit
