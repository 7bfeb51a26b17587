#pragma once

#include "bvarkit/series.hpp"
#include "bvarkit/var_ols.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bvarkit {

enum class Criterion { lr, fpe, aic, sic, hqic };

[[nodiscard]] const char* to_string(Criterion c) noexcept;

struct CriteriaRow {
  int lag = 0;
  double logL = 0.0;
  std::optional<double> lr;
  std::optional<bool> lr_reject;
  double fpe = 0.0;
  double aic = 0.0;
  double sic = 0.0;
  double hqic = 0.0;
  int n_total = 0;
  int n_per_eq = 0;
};

struct SelectionTable {
  std::vector<CriteriaRow> rows;
  std::map<Criterion, int> winners;
  int T_eff = 0;
};

struct LrResult {
  double stat = 0.0;
  bool reject = false;
  double critical_value = 0.0;
};

/**
 * Per-observation information criteria and final prediction error for one
 * candidate order. `lr` is left unset.
 *
 *   aic  = -2 logL / T + 2 n / T
 *   sic  = -2 logL / T + n ln(T) / T
 *   hqic = -2 logL / T + 2 n ln(ln T) / T
 *   fpe  = ((T + m) / (T - m))^N det(Sigma)
 *
 * with n = N m total parameters and m parameters per equation.
 */
[[nodiscard]] CriteriaRow criteria_row(double logL, double ln_det_sigma, int T_eff, int num_vars,
                                       int n_per_eq);

/// Small-sample modified LR statistic ((T - m) / T) * 2 (l1 - l0) against chi-square(df).
[[nodiscard]] LrResult lr_test(double logL_curr, double logL_prev, int T_eff, int m, int df,
                               double alpha = 0.05);

/// Upper-alpha quantile of the chi-square distribution.
[[nodiscard]] double chi_square_upper_quantile(int df, double alpha);

/**
 * Fit orders 0..max_lag on the common sample of T - max_lag rows and mark the
 * order preferred by each criterion. Order 0 is the constants-only model (or
 * the empty model when `base.constant` is false).
 */
[[nodiscard]] SelectionTable select_lag(const SeriesPanel& panel, const VarSpec& base, int max_lag);

/// Winner per criterion from assembled rows; ties resolve toward the smaller lag.
[[nodiscard]] std::map<Criterion, int> pick_winners(const std::vector<CriteriaRow>& rows);

void write_selection_csv(std::ostream& out, const SelectionTable& table);

}  // namespace bvarkit
