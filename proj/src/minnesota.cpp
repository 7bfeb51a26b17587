#include "bvarkit/minnesota.hpp"

#include "bvarkit/error.hpp"
#include "bvarkit/format.hpp"

#include <cmath>
#include <ostream>

namespace bvarkit {
namespace {

std::vector<Regressor> layout_for(const VarSpec& spec, int num_vars) {
  std::vector<Regressor> layout;
  if (spec.constant) layout.push_back({Regressor::Kind::constant, -1, 0});
  for (int k = 1; k <= spec.lag_order; ++k) {
    for (int j = 0; j < num_vars; ++j) layout.push_back({Regressor::Kind::lag, j, k});
  }
  return layout;
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(Errc::invalid_argument, std::string("hyper.") + field + " must be a positive finite number");
  }
}

}  // namespace

void MinnesotaHyper::validate() const {
  require_positive(gamma, "gamma");
  require_positive(decay_exponent, "decay_exponent");
  require_positive(constant_scale, "constant_scale");
  if (!(cross_tightness > 0.0 && cross_tightness <= 1.0)) {
    throw Error(Errc::invalid_argument, "hyper.cross_tightness must lie in (0, 1]");
  }
}

MinnesotaPrior build_prior(const MinnesotaHyper& hyper, const ArSigmaVector& scales, const VarSpec& spec,
                           int num_vars) {
  hyper.validate();
  if (spec.lag_order < 1) throw Error(Errc::invalid_argument, "lag order must be >= 1");
  if (scales.s.size() != num_vars) {
    throw Error(Errc::dimension_mismatch, "need one AR scale per variable");
  }
  for (Eigen::Index j = 0; j < scales.s.size(); ++j) {
    if (!(scales.s(j) > 0.0)) throw Error(Errc::degenerate_scale, "AR scales must be strictly positive");
  }

  MinnesotaPrior prior;
  prior.layout = layout_for(spec, num_vars);
  prior.num_vars = num_vars;
  prior.hyper = hyper;
  const int K = prior.num_regressors();
  const Eigen::Index Q = static_cast<Eigen::Index>(num_vars) * K;
  prior.mu0 = Eigen::VectorXd::Zero(Q);
  prior.M0_diag.resize(Q);
  for (int i = 0; i < num_vars; ++i) {
    for (int r = 0; r < K; ++r) {
      const auto& reg = prior.layout[r];
      const Eigen::Index q = static_cast<Eigen::Index>(i) * K + r;
      if (reg.kind == Regressor::Kind::constant) {
        prior.M0_diag(q) = hyper.constant_scale * hyper.constant_scale;
        continue;
      }
      const int j = reg.variable;
      const double decay = std::pow(static_cast<double>(reg.lag), -hyper.decay_exponent);
      const double cross = i == j ? 1.0 : hyper.cross_tightness;
      const double sd = hyper.gamma * decay * cross * scales.s(i) / scales.s(j);
      prior.M0_diag(q) = sd * sd;
      if (i == j && reg.lag == 1) prior.mu0(q) = 1.0;
    }
  }
  return prior;
}

PosteriorEstimate posterior(const DesignMatrices& design, const MinnesotaPrior& prior,
                            const Eigen::MatrixXd& sigma) {
  const int N = design.num_vars();
  const int K = design.num_regressors();
  if (prior.num_vars != N || prior.layout != design.layout) {
    throw Error(Errc::dimension_mismatch, "prior layout does not match the design");
  }
  if (sigma.rows() != N || sigma.cols() != N) {
    throw Error(Errc::dimension_mismatch, "Sigma must be N x N");
  }
  if (!(prior.M0_diag.array() > 0.0).all() || !prior.M0_diag.allFinite()) {
    throw Error(Errc::not_positive_definite, "prior variances must be positive and finite");
  }
  Eigen::LLT<Eigen::MatrixXd> sigma_llt(sigma);
  if (sigma_llt.info() != Eigen::Success) {
    throw Error(Errc::not_positive_definite, "Sigma is not positive definite");
  }
  const Eigen::MatrixXd sigma_inv = sigma_llt.solve(Eigen::MatrixXd::Identity(N, N));

  const Eigen::Index Q = static_cast<Eigen::Index>(N) * K;
  const Eigen::MatrixXd XtX = design.X.transpose() * design.X;
  Eigen::MatrixXd precision(Q, Q);
  for (int i = 0; i < N; ++i) {
    for (int l = 0; l < N; ++l) {
      precision.block(static_cast<Eigen::Index>(i) * K, static_cast<Eigen::Index>(l) * K, K, K) =
          sigma_inv(i, l) * XtX;
    }
  }
  const Eigen::VectorXd prior_precision = prior.M0_diag.cwiseInverse();
  precision.diagonal() += prior_precision;

  const Eigen::MatrixXd XtYS = design.X.transpose() * design.Y * sigma_inv;  // K x N
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(XtYS.data(), Q);
  rhs += prior_precision.cwiseProduct(prior.mu0);

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::not_positive_definite, "posterior precision is not positive definite");
  }
  PosteriorEstimate post;
  post.beta_B = llt.solve(rhs);
  post.V = llt.solve(Eigen::MatrixXd::Identity(Q, Q));
  post.V = 0.5 * (post.V + post.V.transpose()).eval();
  post.sigma_plugin = sigma;
  post.hyper = prior.hyper;
  return post;
}

BvarFit fit_bvar_detailed(const SeriesPanel& panel, const VarSpec& spec, const MinnesotaHyper& hyper) {
  hyper.validate();
  const int N = panel.num_vars();
  if (panel.num_periods() - spec.lag_order < 2) {
    throw Error(Errc::insufficient_sample, "BVAR needs at least 2 usable rows");
  }
  const DesignMatrices design = build_design(panel, spec.lag_order, spec.constant);

  BvarFit fit;
  fit.scales = univariate_ar_sigmas(panel, spec.lag_order, spec.constant);
  Eigen::MatrixXd sigma;
  try {
    const VarEstimate ols = fit_ols(design, spec);
    sigma = ols.Sigma;
    Eigen::LLT<Eigen::MatrixXd> check(sigma);
    if (check.info() != Eigen::Success) throw Error(Errc::degenerate_covariance, "OLS Sigma not PD");
    (void)log_det_spd(sigma);  // throws on a near-singular Sigma
  } catch (const Error& e) {
    if (e.code() != Errc::singular_design && e.code() != Errc::degenerate_covariance) throw;
    sigma = fit.scales.s.array().square().matrix().asDiagonal();
    fit.sigma_from_ols = false;
  }

  fit.prior = build_prior(hyper, fit.scales, spec, N);
  fit.posterior = posterior(design, fit.prior, sigma);

  const int K = design.num_regressors();
  const Eigen::MatrixXd B = Eigen::Map<const Eigen::MatrixXd>(fit.posterior.beta_B.data(), K, N);
  VarEstimate& est = fit.estimate;
  est.spec = spec;
  est.source = EstimateSource::bvar_posterior_mean;
  est.T_eff = design.rows();
  unpack_coefficients(B, design.layout, N, spec.lag_order, est.A, est.c);
  est.Sigma = sigma;
  try {
    est.logL = log_likelihood(sigma, est.T_eff);
  } catch (const Error&) {
    est.logL.reset();
  }
  if (est.T_eff > K) est.per_equation = fit_stats(design, est);
  return fit;
}

VarEstimate fit_bvar(const SeriesPanel& panel, const VarSpec& spec, const MinnesotaHyper& hyper) {
  return fit_bvar_detailed(panel, spec, hyper).estimate;
}

void write_coefficients_csv(std::ostream& out, const VarEstimate& est, const std::vector<std::string>& names) {
  const int N = est.num_vars();
  if (static_cast<int>(names.size()) != N) {
    throw Error(Errc::dimension_mismatch, "need one name per equation");
  }
  std::vector<Regressor> layout;
  if (est.spec.constant) layout.push_back({Regressor::Kind::constant, -1, 0});
  for (int k = 1; k <= est.lag_order(); ++k) {
    for (int j = 0; j < N; ++j) layout.push_back({Regressor::Kind::lag, j, k});
  }
  const Eigen::MatrixXd B = coefficient_matrix(est, layout);

  out << "regressor";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < layout.size(); ++r) {
    out << regressor_label(layout[r], names);
    for (int i = 0; i < N; ++i) out << ',' << format_double(B(static_cast<Eigen::Index>(r), i));
    out << '\n';
  }
  const bool have_stats = static_cast<int>(est.per_equation.size()) == N;
  out << "R-squared";
  for (int i = 0; i < N; ++i) out << ',' << (have_stats ? format_double(est.per_equation[i].r_squared) : "NA");
  out << "\nS.E. equation";
  for (int i = 0; i < N; ++i) out << ',' << (have_stats ? format_double(est.per_equation[i].se_equation) : "NA");
  out << '\n';
}

}  // namespace bvarkit
