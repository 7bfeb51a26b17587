#include "bvarkit/lag_select.hpp"

#include "bvarkit/error.hpp"
#include "bvarkit/format.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <ostream>

namespace bvarkit {

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::lr: return "lr";
    case Criterion::fpe: return "fpe";
    case Criterion::aic: return "aic";
    case Criterion::sic: return "sic";
    case Criterion::hqic: return "hqic";
  }
  return "?";
}

CriteriaRow criteria_row(double logL, double ln_det_sigma, int T_eff, int num_vars, int n_per_eq) {
  if (T_eff <= n_per_eq) {
    throw Error(Errc::non_positive_dof, "FPE undefined: T_eff = " + std::to_string(T_eff) +
                                            " <= parameters per equation = " + std::to_string(n_per_eq));
  }
  const double T = T_eff;
  const double lnln = T > 1.0 ? std::log(std::log(T)) : -1.0;
  if (!(lnln > 0.0)) {
    throw Error(Errc::invalid_argument,
                "HQIC undefined: ln(ln(T_eff)) must be positive, T_eff = " + std::to_string(T_eff));
  }
  CriteriaRow row;
  row.logL = logL;
  row.n_per_eq = n_per_eq;
  row.n_total = num_vars * n_per_eq;
  const double fit = -2.0 * logL / T;
  const double n = row.n_total;
  row.aic = fit + 2.0 * n / T;
  row.sic = fit + n * std::log(T) / T;
  row.hqic = fit + 2.0 * n * lnln / T;
  row.fpe = std::pow((T + n_per_eq) / (T - n_per_eq), num_vars) * std::exp(ln_det_sigma);
  return row;
}

double chi_square_upper_quantile(int df, double alpha) {
  boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

LrResult lr_test(double logL_curr, double logL_prev, int T_eff, int m, int df, double alpha) {
  if (m >= T_eff) {
    throw Error(Errc::non_positive_dof, "LR small-sample modification degenerate: m = " +
                                            std::to_string(m) + " >= T_eff = " + std::to_string(T_eff));
  }
  if (logL_curr < logL_prev - 1e-9) {
    throw Error(Errc::invalid_argument, "larger model has lower log-likelihood than the nested one");
  }
  if (df < 1) throw Error(Errc::invalid_argument, "LR test needs df >= 1");
  LrResult r;
  r.stat = (static_cast<double>(T_eff - m) / T_eff) * 2.0 * (logL_curr - logL_prev);
  r.critical_value = chi_square_upper_quantile(df, alpha);
  r.reject = r.stat > r.critical_value;
  return r;
}

std::map<Criterion, int> pick_winners(const std::vector<CriteriaRow>& rows) {
  std::map<Criterion, int> w;
  if (rows.empty()) return w;
  auto argmin = [&](auto field) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (field(rows[i]) < field(rows[best])) best = i;
    }
    return rows[best].lag;
  };
  w[Criterion::fpe] = argmin([](const CriteriaRow& r) { return r.fpe; });
  w[Criterion::aic] = argmin([](const CriteriaRow& r) { return r.aic; });
  w[Criterion::sic] = argmin([](const CriteriaRow& r) { return r.sic; });
  w[Criterion::hqic] = argmin([](const CriteriaRow& r) { return r.hqic; });
  int lr = rows.front().lag;
  for (const auto& r : rows) {
    if (r.lr_reject.value_or(false)) lr = r.lag;
  }
  w[Criterion::lr] = lr;
  return w;
}

SelectionTable select_lag(const SeriesPanel& panel, const VarSpec& base, int max_lag) {
  const int T = panel.num_periods();
  const int N = panel.num_vars();
  if (max_lag < 0) throw Error(Errc::invalid_argument, "maximum lag must be non-negative");
  if (T - max_lag < N * max_lag + 2) {
    throw Error(Errc::insufficient_sample, "lag selection up to " + std::to_string(max_lag) +
                                               " needs T - d_max >= N d_max + 2 (T = " +
                                               std::to_string(T) + ", N = " + std::to_string(N) + ")");
  }

  SelectionTable table;
  table.T_eff = T - max_lag;
  const int c = base.constant ? 1 : 0;

  // Order 0: constants only on the common sample.
  {
    DesignMatrices d0;
    d0.Y = panel.values().bottomRows(table.T_eff);
    d0.X = Eigen::MatrixXd::Ones(table.T_eff, c);
    if (base.constant) d0.layout.push_back({Regressor::Kind::constant, -1, 0});
    d0.constant = base.constant;
    d0.first_period = max_lag;
    const Eigen::MatrixXd B = least_squares(d0);
    const Eigen::MatrixXd E = d0.Y - d0.X * B;
    const Eigen::MatrixXd sigma = E.transpose() * E / static_cast<double>(table.T_eff);
    const double ln_det = log_det_spd(sigma);
    const double logL = log_likelihood(sigma, table.T_eff);
    CriteriaRow row = criteria_row(logL, ln_det, table.T_eff, N, c);
    row.lag = 0;
    table.rows.push_back(row);
  }

  for (int lag = 1; lag <= max_lag; ++lag) {
    const DesignMatrices d = build_design(panel, lag, base.constant, max_lag);
    VarSpec spec = base;
    spec.lag_order = lag;
    const VarEstimate est = fit_ols(d, spec);
    const double ln_det = log_det_spd(est.Sigma);
    const double logL = log_likelihood(est.Sigma, est.T_eff);
    const int m = d.num_regressors();
    CriteriaRow row = criteria_row(logL, ln_det, table.T_eff, N, m);
    row.lag = lag;
    const LrResult lr = lr_test(logL, table.rows.back().logL, table.T_eff, m, N * N);
    row.lr = lr.stat;
    row.lr_reject = lr.reject;
    table.rows.push_back(row);
  }
  table.winners = pick_winners(table.rows);
  return table;
}

void write_selection_csv(std::ostream& out, const SelectionTable& table) {
  static constexpr Criterion order[] = {Criterion::lr, Criterion::fpe, Criterion::aic, Criterion::sic,
                                        Criterion::hqic};
  out << "lag,logL,lr,fpe,aic,sic,hqic";
  for (auto c : order) out << ",winner_" << to_string(c);
  out << '\n';
  for (const auto& r : table.rows) {
    out << r.lag << ',' << format_double(r.logL) << ','
        << (r.lr ? format_double(*r.lr) : std::string("NA")) << ',' << format_double(r.fpe) << ','
        << format_double(r.aic) << ',' << format_double(r.sic) << ',' << format_double(r.hqic);
    for (auto c : order) {
      auto it = table.winners.find(c);
      out << ',' << (it != table.winners.end() && it->second == r.lag ? "true" : "false");
    }
    out << '\n';
  }
}

}  // namespace bvarkit
