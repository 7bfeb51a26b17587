#include "bvarkit/dynamics.hpp"

#include "bvarkit/error.hpp"
#include "bvarkit/format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace bvarkit {

const char* to_string(EffectDirection d) noexcept {
  switch (d) {
    case EffectDirection::increases: return "increases";
    case EffectDirection::decreases: return "decreases";
    case EffectDirection::indeterminate: return "indeterminate";
  }
  return "?";
}

Eigen::MatrixXd companion(const std::vector<Eigen::MatrixXd>& A) {
  if (A.empty()) throw Error(Errc::invalid_argument, "companion matrix needs lag order >= 1");
  const Eigen::Index N = A.front().rows();
  const Eigen::Index d = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N * d, N * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (A[k].rows() != N || A[k].cols() != N) {
      throw Error(Errc::dimension_mismatch, "coefficient matrices must all be N x N");
    }
    F.block(0, k * N, N, N) = A[k];
  }
  if (d > 1) F.bottomLeftCorner(N * (d - 1), N * (d - 1)).setIdentity();
  return F;
}

Eigen::MatrixXd companion(const VarEstimate& est) { return companion(est.A); }

StabilityReport stability(const std::vector<Eigen::MatrixXd>& A) {
  const Eigen::MatrixXd F = companion(A);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(F, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::numerical_failure, "eigenvalue iteration for the companion matrix did not converge");
  }
  std::vector<std::complex<double>> roots(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  StabilityReport report;
  report.moduli.reserve(roots.size());
  for (const auto& r : roots) report.moduli.push_back(std::abs(r));
  report.roots = std::move(roots);
  report.stable = report.moduli.empty() || report.moduli.front() < 1.0;
  return report;
}

StabilityReport stability(const VarEstimate& est) { return stability(est.A); }

ImpulseResponse irf(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int horizon,
                    bool orthogonalized) {
  if (horizon < 0) throw Error(Errc::invalid_argument, "horizon must be non-negative");
  if (A.empty()) throw Error(Errc::invalid_argument, "impulse responses need lag order >= 1");
  const Eigen::Index N = A.front().rows();
  const int d = static_cast<int>(A.size());

  ImpulseResponse ir;
  ir.horizon = horizon;
  ir.orthogonalized = orthogonalized;
  ir.shock_scale = orthogonalized ? ShockScale::one_sd_cholesky : ShockScale::unit;
  ir.psi.reserve(horizon + 1);
  ir.psi.push_back(Eigen::MatrixXd::Identity(N, N));
  for (int h = 1; h <= horizon; ++h) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(N, N);
    for (int k = 1; k <= std::min(h, d); ++k) next.noalias() += A[k - 1] * ir.psi[h - k];
    ir.psi.push_back(std::move(next));
  }
  if (orthogonalized) {
    if (sigma.rows() != N || sigma.cols() != N) {
      throw Error(Errc::dimension_mismatch, "Sigma must be N x N for orthogonalized responses");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::not_positive_definite, "Cholesky factorization of Sigma failed");
    }
    const Eigen::MatrixXd P = llt.matrixL();
    for (auto& p : ir.psi) p = (p * P).eval();
  }
  ir.cumulative.reserve(ir.psi.size());
  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(N, N);
  for (const auto& p : ir.psi) {
    running += p;
    ir.cumulative.push_back(running);
  }
  return ir;
}

ImpulseResponse irf(const VarEstimate& est, int horizon, bool orthogonalized) {
  return irf(est.A, est.Sigma, horizon, orthogonalized);
}

EffectVerdict classify_effect(const ImpulseResponse& ir, int target, int source, double tolerance) {
  if (ir.psi.empty()) throw Error(Errc::invalid_argument, "empty impulse response");
  const int N = static_cast<int>(ir.psi.front().rows());
  if (target < 0 || target >= N || source < 0 || source >= N) {
    throw Error(Errc::invalid_argument, "variable index out of range");
  }
  if (ir.horizon < 1) throw Error(Errc::invalid_argument, "classification needs horizon >= 1");

  EffectVerdict v;
  v.target = target;
  v.source = source;
  int positive = 0;
  for (int h = 1; h <= ir.horizon; ++h) {
    if (ir.cumulative[h](target, source) > 0.0) ++positive;
  }
  v.share_positive = static_cast<double>(positive) / ir.horizon;
  // Compare counts, not the ratio, so exactly half is indeterminate.
  if (2 * positive > ir.horizon) {
    v.direction = EffectDirection::increases;
  } else if (2 * positive < ir.horizon) {
    v.direction = EffectDirection::decreases;
  } else {
    v.direction = EffectDirection::indeterminate;
  }

  double peak = -1.0;
  for (int h = 0; h <= ir.horizon; ++h) {
    const double a = std::abs(ir.psi[h](target, source));
    if (a > peak) {
      peak = a;
      v.peak_period = h;
    }
  }
  int h = ir.horizon;
  while (h >= 0 && std::abs(ir.psi[h](target, source)) < tolerance) --h;
  if (h < ir.horizon) v.settle_period = h + 1;
  return v;
}

void write_roots_csv(std::ostream& out, const StabilityReport& report) {
  out << "index,real,imaginary,modulus\n";
  for (std::size_t i = 0; i < report.roots.size(); ++i) {
    out << i << ',' << format_double(report.roots[i].real()) << ',' << format_double(report.roots[i].imag())
        << ',' << format_double(report.moduli[i]) << '\n';
  }
}

void write_irf_csv(std::ostream& out, const ImpulseResponse& ir, const std::vector<std::string>& names) {
  out << "h,impulse,response,value,cumulative,orthogonalized\n";
  const auto N = static_cast<Eigen::Index>(names.size());
  const char* orth = ir.orthogonalized ? "true" : "false";
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (int h = 0; h <= ir.horizon; ++h) {
        out << h << ',' << names[j] << ',' << names[i] << ',' << format_double(ir.psi[h](i, j)) << ','
            << format_double(ir.cumulative[h](i, j)) << ',' << orth << '\n';
      }
    }
  }
}

void write_verdicts_csv(std::ostream& out, const std::vector<EffectVerdict>& verdicts,
                        const std::vector<std::string>& names) {
  out << "source,direction,share_positive,peak_period,settle_period\n";
  for (const auto& v : verdicts) {
    out << names.at(v.source) << ',' << to_string(v.direction) << ','
        << format_double(v.share_positive) << ',' << v.peak_period << ','
        << (v.settle_period ? std::to_string(*v.settle_period) : std::string("NA")) << '\n';
  }
}

}  // namespace bvarkit
