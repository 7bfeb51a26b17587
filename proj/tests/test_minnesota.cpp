#include "bvarkit/dynamics.hpp"
#include "bvarkit/error.hpp"
#include "bvarkit/minnesota.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace bvarkit;

namespace {

ArSigmaVector scales(std::initializer_list<double> s) {
  ArSigmaVector out;
  out.s.resize(static_cast<Eigen::Index>(s.size()));
  Eigen::Index i = 0;
  for (double v : s) out.s(i++) = v;
  return out;
}

// Scalar design with one regressor and no constant.
DesignMatrices scalar_design(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  DesignMatrices d;
  d.X = x;
  d.Y = y;
  d.layout = {{Regressor::Kind::lag, 0, 1}};
  d.lag_order = 1;
  return d;
}

MinnesotaPrior scalar_prior(double mean, double variance) {
  MinnesotaPrior p;
  p.layout = {{Regressor::Kind::lag, 0, 1}};
  p.num_vars = 1;
  p.mu0 = Eigen::VectorXd::Constant(1, mean);
  p.M0_diag = Eigen::VectorXd::Constant(1, variance);
  return p;
}

}  // namespace

TEST_CASE("build_prior standard deviations") {
  MinnesotaHyper h;
  h.gamma = 0.1;
  h.decay_exponent = 1.0;
  h.cross_tightness = 0.5;
  const auto p = build_prior(h, scales({2.0, 1.0}), {2, false, {}}, 2);
  const int K = p.num_regressors();
  REQUIRE(K == 4);
  // Own first lag, equation 0: gamma.
  CHECK(std::sqrt(p.M0_diag(0 * K + 0)) == doctest::Approx(0.1));
  // Equation 0, variable 1, lag 2: 0.1 * 1/2 * 0.5 * (2/1) = 0.05.
  CHECK(p.M0_diag(0 * K + 3) == doctest::Approx(0.0025).epsilon(1e-12));
  // Equation 1, variable 0, lag 1: 0.1 * 1 * 0.5 * (1/2).
  CHECK(std::sqrt(p.M0_diag(1 * K + 0)) == doctest::Approx(0.025));
}

TEST_CASE("build_prior mean is the random walk") {
  const auto p = build_prior({}, scales({1.0, 3.0}), {1, false, {}}, 2);
  CHECK(p.mu0 == Eigen::Vector4d(1, 0, 0, 1));

  const auto pc = build_prior({}, scales({1.0, 3.0, 2.0}), {2, true, {}}, 3);
  const int K = pc.num_regressors();
  for (int i = 0; i < 3; ++i) {
    for (int r = 0; r < K; ++r) {
      const auto& reg = pc.layout[r];
      const bool own_first = reg.kind == Regressor::Kind::lag && reg.variable == i && reg.lag == 1;
      CHECK(pc.mu0(i * K + r) == (own_first ? 1.0 : 0.0));
    }
    CHECK(pc.M0_diag(i * K) == doctest::Approx(1e6));
  }
  CHECK((pc.M0_diag.array() > 0.0).all());
}

TEST_CASE("build_prior rejects bad inputs") {
  MinnesotaHyper bad;
  bad.gamma = -1.0;
  CHECK_THROWS_AS(build_prior(bad, scales({1.0}), {1, false, {}}, 1), Error);
  MinnesotaHyper cross;
  cross.cross_tightness = 1.5;
  CHECK_THROWS_AS(build_prior(cross, scales({1.0}), {1, false, {}}, 1), Error);
  CHECK_THROWS_AS(build_prior({}, scales({1.0, 0.0}), {1, false, {}}, 2), Error);
  CHECK_THROWS_AS(build_prior({}, scales({1.0}), {1, false, {}}, 2), Error);
}

TEST_CASE("posterior scalar precision-weighted mean") {
  const auto d = scalar_design(Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, 1.0));
  const auto post = posterior(d, scalar_prior(1.0, 1.0), Eigen::MatrixXd::Identity(1, 1));
  CHECK(std::abs(post.V(0, 0) - 0.2) < 1e-12);
  CHECK(std::abs(post.beta_B(0) - 0.6) < 1e-12);
}

TEST_CASE("property: scalar posterior equals the closed form and shrinks between OLS and prior") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 10;
    Eigen::VectorXd x(n), y(n);
    for (int t = 0; t < n; ++t) {
      x(t) = normal(rng);
      y(t) = 0.4 * x(t) + normal(rng);
    }
    const double sigma2 = pos(rng), S2 = pos(rng), mu = normal(rng);
    const auto post = posterior(scalar_design(x, y), scalar_prior(mu, S2), Eigen::MatrixXd::Constant(1, 1, sigma2));
    const double closed = (x.dot(y) / sigma2 + mu / S2) / (x.dot(x) / sigma2 + 1.0 / S2);
    CHECK(post.beta_B(0) == doctest::Approx(closed).epsilon(1e-12));
    const double ols = x.dot(y) / x.dot(x);
    CHECK(post.beta_B(0) >= std::min(ols, mu) - 1e-12);
    CHECK(post.beta_B(0) <= std::max(ols, mu) + 1e-12);
  }
}

TEST_CASE("property: tighter gamma moves the scalar posterior toward the prior mean") {
  const Eigen::MatrixXd v = test::simulate_var({Eigen::MatrixXd::Constant(1, 1, 0.3)}, Eigen::VectorXd::Zero(1), 1.0, 25, 12);
  const auto panel = test::make_panel(v);
  const auto d = build_design(panel, 1, false);
  const auto s = univariate_ar_sigmas(panel, 1, false);
  double previous = -1.0;
  for (double gamma : {0.001, 0.01, 0.05, 0.1, 0.3, 1.0, 10.0}) {
    MinnesotaHyper h;
    h.gamma = gamma;
    const auto prior = build_prior(h, s, {1, false, {}}, 1);
    const auto post = posterior(d, prior, Eigen::MatrixXd::Constant(1, 1, 1.0));
    const double dist = std::abs(post.beta_B(0) - prior.mu0(0));
    CHECK(dist >= previous);
    previous = dist;
  }
}

TEST_CASE("posterior flat-prior limit matches OLS on random full-rank designs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 1 + trial % 3;
    const int lag = 1 + trial % 2;
    const Eigen::MatrixXd v = test::simulate_var({0.4 * Eigen::MatrixXd::Identity(N, N)}, Eigen::VectorXd::Ones(N), 1.0, 40, rng());
    const auto d = build_design(test::make_panel(v), lag, true);
    const VarSpec spec{lag, true, {}};
    const auto ols = fit_ols(d, spec);
    auto prior = build_prior({}, univariate_ar_sigmas(test::make_panel(v), lag, true), spec, N);
    prior.M0_diag.setConstant(1e12);
    const auto post = posterior(d, prior, ols.Sigma);
    const Eigen::MatrixXd B = coefficient_matrix(ols, d.layout);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(B.data(), B.size());
    CHECK((post.beta_B - b).cwiseAbs().maxCoeff() <= 1e-5 * b.cwiseAbs().maxCoeff());
    CHECK((post.beta_B - b).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("posterior dogmatic limit returns the prior mean") {
  const Eigen::MatrixXd v = test::simulate_var({test::strong_var1_matrix()}, Eigen::VectorXd::Zero(3), 1.0, 50, 31);
  const auto panel = test::make_panel(v);
  MinnesotaHyper h;
  h.gamma = 1e-8;
  const VarSpec spec{2, true, {}};
  const auto fit = fit_bvar_detailed(panel, spec, h);
  const int K = fit.prior.num_regressors();
  for (int i = 0; i < 3; ++i) {
    for (int r = 0; r < K; ++r) {
      if (fit.prior.layout[r].kind == Regressor::Kind::constant) continue;
      CHECK(std::abs(fit.posterior.beta_B(i * K + r) - fit.prior.mu0(i * K + r)) < 1e-6);
    }
  }
  CHECK((fit.estimate.A[0] - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(fit.estimate.A[1].cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("posterior covariance is symmetric positive definite") {
  const Eigen::MatrixXd v = test::simulate_var({test::strong_var1_matrix()}, Eigen::VectorXd::Zero(3), 1.0, 30, 2);
  const auto fit = fit_bvar_detailed(test::make_panel(v), {2, true, {}}, {});
  const auto& V = fit.posterior.V;
  CHECK((V - V.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * V.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(V);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("posterior rejects a non-positive-definite Sigma") {
  const auto d = scalar_design(Eigen::VectorXd::Constant(2, 1.0), Eigen::VectorXd::Constant(2, 1.0));
  try {
    (void)posterior(d, scalar_prior(1.0, 1.0), Eigen::MatrixXd::Constant(1, 1, -1.0));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
  }
  auto bad = scalar_prior(1.0, 1.0);
  bad.M0_diag(0) = 0.0;
  CHECK_THROWS_AS(posterior(d, bad, Eigen::MatrixXd::Identity(1, 1)), Error);
}

TEST_CASE("fit_bvar is consistent on a long simulated VAR(1)") {
  // Sampling sd of each coefficient is about 0.01 at T = 5000.
  const Eigen::MatrixXd a = test::strong_var1_matrix();
  const Eigen::MatrixXd v = test::simulate_var({a}, Eigen::VectorXd::Zero(3), 1.0, 5000, 2024);
  MinnesotaHyper h;
  h.gamma = 0.2;
  const auto est = fit_bvar(test::make_panel(v), {1, true, {}}, h);
  CHECK(est.source == EstimateSource::bvar_posterior_mean);
  CHECK((est.A[0] - a).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("fit_bvar regularizes a panel with fewer rows than regressors") {
  const Eigen::MatrixXd v = test::simulate_var({0.5 * Eigen::MatrixXd::Identity(7, 7)}, Eigen::VectorXd::Zero(7), 1.0, 7, 606);
  const auto panel = test::make_panel(v);
  const auto d = build_design(panel, 1, true);
  REQUIRE(d.rows() < d.num_regressors());
  try {
    (void)fit_ols(d, {1, true, {}});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_design);
  }
  const auto fit = fit_bvar_detailed(panel, {1, true, {}}, {});
  CHECK_FALSE(fit.sigma_from_ols);
  CHECK(fit.estimate.A[0].allFinite());
  CHECK(fit.estimate.c.allFinite());
  Eigen::LLT<Eigen::MatrixXd> llt(fit.posterior.V);
  CHECK(llt.info() == Eigen::Success);
  CHECK(fit.estimate.per_equation.empty());
}

TEST_CASE("fit_bvar on the bundled 7 x 18 panel is stable with default hyperparameters") {
  const auto raw = load_panel_file(std::string(BVARKIT_DATA_DIR) + "/synthetic_panel.csv");
  const auto panel = normalize(raw).panel;
  REQUIRE(panel.num_vars() == 7);
  REQUIRE(panel.num_periods() == 18);
  const auto est = fit_bvar(panel, {1, true, panel.names()}, {});
  CHECK(stability(est).stable);
  REQUIRE(est.per_equation.size() == 7);
  for (const auto& e : est.per_equation) {
    CHECK(e.r_squared <= 1.0);
    CHECK(e.se_equation >= 0.0);
  }
}
