#pragma once

#include "bvarkit/var_ols.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bvarkit {

struct StabilityReport {
  std::vector<std::complex<double>> roots;  // sorted by modulus, descending
  std::vector<double> moduli;
  bool stable = false;

  [[nodiscard]] double max_modulus() const { return moduli.empty() ? 0.0 : moduli.front(); }
};

enum class ShockScale { unit, one_sd_cholesky };

struct ImpulseResponse {
  int horizon = 0;
  std::vector<Eigen::MatrixXd> psi;         // psi[h](i, j): response of i at step h to a shock in j
  std::vector<Eigen::MatrixXd> cumulative;  // running sums of psi
  bool orthogonalized = false;
  ShockScale shock_scale = ShockScale::unit;
};

enum class EffectDirection { increases, decreases, indeterminate };

[[nodiscard]] const char* to_string(EffectDirection d) noexcept;

struct EffectVerdict {
  int source = 0;
  int target = 0;
  EffectDirection direction = EffectDirection::indeterminate;
  double share_positive = 0.0;
  int peak_period = 0;
  std::optional<int> settle_period;  // unset if the response never stays below tolerance within H
};

/// (N d) x (N d) companion matrix: [A_1 ... A_d] on top, identity blocks below the diagonal.
[[nodiscard]] Eigen::MatrixXd companion(const VarEstimate& est);
[[nodiscard]] Eigen::MatrixXd companion(const std::vector<Eigen::MatrixXd>& A);

/// Eigenvalues of the companion matrix. Stable iff every modulus is strictly below one.
[[nodiscard]] StabilityReport stability(const VarEstimate& est);
[[nodiscard]] StabilityReport stability(const std::vector<Eigen::MatrixXd>& A);

/**
 * Moving-average coefficients psi[0..H]: psi[0] = I and
 * psi[h] = sum_{k=1}^{min(h,d)} A_k psi[h-k]. With `orthogonalized`, each
 * psi[h] is right-multiplied by the lower Cholesky factor of Sigma (panel
 * variable order).
 */
[[nodiscard]] ImpulseResponse irf(const VarEstimate& est, int horizon, bool orthogonalized);
[[nodiscard]] ImpulseResponse irf(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma,
                                  int horizon, bool orthogonalized);

/**
 * Majority rule over the cumulative response of `target` to `source` for
 * h = 1..H: increases if more than half the horizons are positive, decreases
 * if fewer than half. Peak and settle periods refer to the plain response.
 */
[[nodiscard]] EffectVerdict classify_effect(const ImpulseResponse& ir, int target, int source,
                                            double tolerance = 1e-3);

void write_roots_csv(std::ostream& out, const StabilityReport& report);
void write_irf_csv(std::ostream& out, const ImpulseResponse& ir, const std::vector<std::string>& names);
void write_verdicts_csv(std::ostream& out, const std::vector<EffectVerdict>& verdicts,
                        const std::vector<std::string>& names);

}  // namespace bvarkit
