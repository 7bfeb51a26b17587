#include "bvarkit/var_ols.hpp"

#include "bvarkit/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bvarkit {
namespace {

// Names the regressors that dominate the right singular vector of the smallest
// singular value, i.e. the near-linear dependency.
std::string describe_collinearity(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd,
                                  const std::vector<Regressor>& layout, Eigen::Index rank) {
  std::ostringstream msg;
  const auto& sv = svd.singularValues();
  const Eigen::Index K = svd.matrixV().rows();
  msg << "regressor matrix is rank deficient (rank " << rank << " of " << K << " regressors";
  if (sv.size() > 0) msg << ", singular value ratio " << sv(sv.size() - 1) / sv(0);
  msg << ")";
  if (K > sv.size()) {
    msg << "; fewer usable rows (" << sv.size() << ") than regressors";
    return msg.str();
  }
  Eigen::VectorXd v = svd.matrixV().col(K - 1);
  msg << "; near-dependency among:";
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index r = 0; r < K; ++r) {
    if (std::abs(v(r)) < 0.1 * vmax) continue;
    const auto& reg = layout[r];
    if (reg.kind == Regressor::Kind::constant) {
      msg << " const";
    } else {
      msg << " var" << reg.variable << "_lag" << reg.lag;
    }
    msg << "(" << v(r) << ")";
  }
  return msg.str();
}

}  // namespace

const char* to_string(EstimateSource s) noexcept {
  return s == EstimateSource::ols ? "ols" : "bvar_posterior_mean";
}

Eigen::MatrixXd coefficient_matrix(const VarEstimate& est, const std::vector<Regressor>& layout) {
  Eigen::MatrixXd B(static_cast<Eigen::Index>(layout.size()), est.num_vars());
  for (std::size_t r = 0; r < layout.size(); ++r) {
    const auto& reg = layout[r];
    if (reg.kind == Regressor::Kind::constant) {
      B.row(r) = est.c.transpose();
    } else {
      B.row(r) = est.A.at(reg.lag - 1).col(reg.variable).transpose();
    }
  }
  return B;
}

void unpack_coefficients(const Eigen::MatrixXd& B, const std::vector<Regressor>& layout, int num_vars,
                         int lag_order, std::vector<Eigen::MatrixXd>& A, Eigen::VectorXd& c) {
  A.assign(lag_order, Eigen::MatrixXd::Zero(num_vars, num_vars));
  c = Eigen::VectorXd::Zero(num_vars);
  for (std::size_t r = 0; r < layout.size(); ++r) {
    const auto& reg = layout[r];
    if (reg.kind == Regressor::Kind::constant) {
      c = B.row(r).transpose();
    } else {
      A[reg.lag - 1].col(reg.variable) = B.row(r).transpose();
    }
  }
}

Eigen::MatrixXd least_squares(const DesignMatrices& design) {
  const auto& X = design.X;
  if (X.cols() == 0) return Eigen::MatrixXd::Zero(0, design.Y.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTolerance * sv(0)) ++rank;
  }
  if (sv.size() == 0 || sv(0) == 0.0 || rank < X.cols()) {
    throw Error(Errc::singular_design, describe_collinearity(svd, design.layout, rank));
  }
  return X.colPivHouseholderQr().solve(design.Y);
}

VarEstimate fit_ols(const DesignMatrices& design, const VarSpec& spec) {
  if (spec.lag_order != design.lag_order || spec.constant != design.constant) {
    throw Error(Errc::invalid_argument, "VarSpec does not match the design (lag order / constant)");
  }
  if (!spec.variable_order.empty() &&
      static_cast<int>(spec.variable_order.size()) != design.num_vars()) {
    throw Error(Errc::dimension_mismatch, "VarSpec variable order does not match design width");
  }
  const Eigen::MatrixXd B = least_squares(design);
  const Eigen::MatrixXd E = design.Y - design.X * B;

  VarEstimate est;
  est.spec = spec;
  est.source = EstimateSource::ols;
  est.T_eff = design.rows();
  unpack_coefficients(B, design.layout, design.num_vars(), design.lag_order, est.A, est.c);
  est.Sigma = (E.transpose() * E) / static_cast<double>(est.T_eff);
  try {
    est.logL = log_likelihood(est.Sigma, est.T_eff);
  } catch (const Error&) {
    est.logL.reset();
  }
  if (est.T_eff > design.num_regressors()) est.per_equation = fit_stats(design, est);
  return est;
}

double log_det_spd(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(Errc::degenerate_covariance, "covariance must be a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(Errc::degenerate_covariance, "eigen-decomposition of covariance failed");
  }
  const auto& ev = eig.eigenvalues();
  const double largest = ev.maxCoeff();
  if (!(largest > 0.0) || ev.minCoeff() <= 1e-13 * largest) {
    std::ostringstream msg;
    msg << "covariance is singular or indefinite (eigenvalues in [" << ev.minCoeff() << ", " << largest
        << "])";
    throw Error(Errc::degenerate_covariance, msg.str());
  }
  return ev.array().log().sum();
}

double log_likelihood(const Eigen::MatrixXd& sigma, int T_eff) {
  const double N = static_cast<double>(sigma.rows());
  const double ln_det = log_det_spd(sigma);
  return -0.5 * T_eff * (N * (1.0 + std::log(2.0 * std::numbers::pi)) + ln_det);
}

double log_likelihood(const VarEstimate& est) { return log_likelihood(est.Sigma, est.T_eff); }

std::vector<EquationFit> fit_stats(const DesignMatrices& design, const VarEstimate& est) {
  const int dof = design.rows() - design.num_regressors();
  if (dof <= 0) {
    throw Error(Errc::non_positive_dof, "no residual degrees of freedom: T_eff = " +
                                            std::to_string(design.rows()) + ", K = " +
                                            std::to_string(design.num_regressors()));
  }
  const Eigen::MatrixXd B = coefficient_matrix(est, design.layout);
  const Eigen::MatrixXd E = design.Y - design.X * B;
  std::vector<EquationFit> out;
  for (Eigen::Index i = 0; i < design.Y.cols(); ++i) {
    const double ssr = E.col(i).squaredNorm();
    const double sst = (design.Y.col(i).array() - design.Y.col(i).mean()).square().sum();
    out.push_back({1.0 - ssr / sst, std::sqrt(ssr / dof)});
  }
  return out;
}

ArSigmaVector univariate_ar_sigmas(const SeriesPanel& panel, int lag_order, bool constant,
                                   std::optional<int> common_max_lag) {
  const int T = panel.num_periods();
  const int rows = T - common_max_lag.value_or(lag_order);
  const int params = lag_order + (constant ? 1 : 0);
  if (rows <= params) {
    throw Error(Errc::insufficient_sample, "univariate AR(" + std::to_string(lag_order) + ") needs more than " +
                                               std::to_string(params) + " usable rows, got " +
                                               std::to_string(rows));
  }
  ArSigmaVector out;
  out.s.resize(panel.num_vars());
  for (int j = 0; j < panel.num_vars(); ++j) {
    SeriesPanel single({panel.names()[j]}, panel.times(), panel.values().col(j));
    const DesignMatrices d = build_design(single, lag_order, constant, common_max_lag);
    const Eigen::MatrixXd b = least_squares(d);
    const Eigen::VectorXd e = d.Y.col(0) - d.X * b.col(0);
    const double s = std::sqrt(e.squaredNorm() / (d.rows() - params));
    const double scale = d.Y.cwiseAbs().maxCoeff();
    if (!(s > 1e-10 * scale) || !(s > 0.0)) {
      throw Error(Errc::degenerate_scale, "univariate AR residual variance of '" + panel.names()[j] +
                                              "' is zero; the series is deterministic");
    }
    out.s(j) = s;
  }
  return out;
}

}  // namespace bvarkit
