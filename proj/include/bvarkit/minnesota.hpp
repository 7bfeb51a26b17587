#pragma once

#include "bvarkit/series.hpp"
#include "bvarkit/var_ols.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace bvarkit {

/**
 * Minnesota prior hyperparameters.
 *
 * The prior standard deviation of the coefficient on variable j at lag k in
 * equation i is
 *
 *     gamma * k^(-decay_exponent) * f(i, j) * s_i / s_j,
 *
 * with f(i, i) = 1 and f(i, j) = cross_tightness otherwise. Constant terms get
 * a zero-mean prior with standard deviation constant_scale.
 */
struct MinnesotaHyper {
  double gamma = 0.1;
  double decay_exponent = 1.0;
  double cross_tightness = 0.5;
  double constant_scale = 1e3;

  /// Throws Errc::invalid_argument naming the offending field.
  void validate() const;
};

/// Prior mean and diagonal prior variance of the stacked coefficient vector.
/// Entry i * K + r belongs to equation i, regressor r of `layout`.
struct MinnesotaPrior {
  Eigen::VectorXd mu0;
  Eigen::VectorXd M0_diag;
  std::vector<Regressor> layout;
  int num_vars = 0;
  MinnesotaHyper hyper;

  [[nodiscard]] int num_regressors() const noexcept { return static_cast<int>(layout.size()); }
};

struct PosteriorEstimate {
  Eigen::VectorXd beta_B;
  Eigen::MatrixXd V;
  Eigen::MatrixXd sigma_plugin;
  MinnesotaHyper hyper;
};

[[nodiscard]] MinnesotaPrior build_prior(const MinnesotaHyper& hyper, const ArSigmaVector& scales,
                                         const VarSpec& spec, int num_vars);

/**
 * Conditional posterior of the stacked coefficients given Sigma:
 *
 *     V      = [ Sigma^-1 (x) X'X + M0^-1 ]^-1
 *     beta_B = V [ vec(X' Y Sigma^-1) + M0^-1 mu0 ]
 *
 * Solved through a Cholesky factorization of the Q x Q precision.
 */
[[nodiscard]] PosteriorEstimate posterior(const DesignMatrices& design, const MinnesotaPrior& prior,
                                          const Eigen::MatrixXd& sigma);

struct BvarFit {
  VarEstimate estimate;
  MinnesotaPrior prior;
  PosteriorEstimate posterior;
  ArSigmaVector scales;
  bool sigma_from_ols = true;  // false when OLS was rank deficient and the AR-variance diagonal was used
};

/// Posterior-mean VAR. Sigma is plugged in from OLS on the same design.
[[nodiscard]] VarEstimate fit_bvar(const SeriesPanel& panel, const VarSpec& spec, const MinnesotaHyper& hyper);
[[nodiscard]] BvarFit fit_bvar_detailed(const SeriesPanel& panel, const VarSpec& spec,
                                        const MinnesotaHyper& hyper);

/**
 * Coefficient table: one row per regressor, one column per equation, followed
 * by `R-squared` and `S.E. equation` rows (NA when undefined).
 */
void write_coefficients_csv(std::ostream& out, const VarEstimate& est, const std::vector<std::string>& names);

}  // namespace bvarkit
