#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bvarkit {

/**
 * Named multivariate time series: N variables observed over T periods.
 *
 * Values are stored period-major (row = period, column = variable). The
 * constructor enforces the panel invariants: N >= 1, T >= 2, unique names,
 * strictly increasing period labels and finite values throughout.
 */
class SeriesPanel {
 public:
  SeriesPanel(std::vector<std::string> names, std::vector<std::string> times,
              Eigen::MatrixXd values);

  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::vector<std::string>& times() const noexcept { return times_; }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }

  [[nodiscard]] int num_vars() const noexcept { return static_cast<int>(names_.size()); }
  [[nodiscard]] int num_periods() const noexcept { return static_cast<int>(times_.size()); }

  /// Column index of `name`, or nullopt when absent.
  [[nodiscard]] std::optional<int> index_of(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> times_;
  Eigen::MatrixXd values_;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

/// Per-variable min/max used by min-max scaling. Every range must satisfy max > min.
class NormalizationParams {
 public:
  NormalizationParams(std::vector<ValueRange> ranges, std::vector<std::string> names = {});

  [[nodiscard]] const std::vector<ValueRange>& ranges() const noexcept { return ranges_; }
  [[nodiscard]] std::size_t size() const noexcept { return ranges_.size(); }

 private:
  std::vector<ValueRange> ranges_;
};

/// One column of the regressor matrix.
struct Regressor {
  enum class Kind { constant, lag };
  Kind kind = Kind::constant;
  int variable = -1;  // panel column; -1 for the constant
  int lag = 0;        // 1-based lag; 0 for the constant

  friend bool operator==(const Regressor&, const Regressor&) = default;
};

/**
 * Stacked regression form of a VAR(d): Y = X B + E.
 *
 * Column order of X is [constant | lag 1 block | ... | lag d block] with
 * variables in panel order inside each block. Row t of Y is the panel row
 * `first_period + t`.
 */
struct DesignMatrices {
  Eigen::MatrixXd Y;
  Eigen::MatrixXd X;
  std::vector<Regressor> layout;
  int lag_order = 0;
  bool constant = false;
  int first_period = 0;

  [[nodiscard]] int rows() const noexcept { return static_cast<int>(Y.rows()); }
  [[nodiscard]] int num_vars() const noexcept { return static_cast<int>(Y.cols()); }
  [[nodiscard]] int num_regressors() const noexcept { return static_cast<int>(X.cols()); }
};

struct VariableSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double sd = 0.0;
};

/// Parse CSV text (`time,name1,...,nameN` header, one period per row).
[[nodiscard]] SeriesPanel load_panel(std::istream& source);
[[nodiscard]] SeriesPanel load_panel_file(const std::filesystem::path& path);

/// Min-max scale every column to [0, 1]. Throws on a constant column.
struct NormalizedPanel {
  SeriesPanel panel;
  NormalizationParams params;
};
[[nodiscard]] NormalizedPanel normalize(const SeriesPanel& panel);

[[nodiscard]] SeriesPanel denormalize(const SeriesPanel& panel, const NormalizationParams& params);

/**
 * Build the stacked regression matrices for lag order `lag_order`.
 *
 * When `common_max_lag` is set, the first (common_max_lag - lag_order) usable
 * rows are dropped so that every candidate order up to common_max_lag is fitted
 * on the same T - common_max_lag observations.
 */
[[nodiscard]] DesignMatrices build_design(const SeriesPanel& panel, int lag_order, bool constant,
                                          std::optional<int> common_max_lag = std::nullopt);

[[nodiscard]] std::vector<VariableSummary> describe(const SeriesPanel& panel);

/// Human-readable regressor label, e.g. `const` or `gdp_lag2`.
[[nodiscard]] std::string regressor_label(const Regressor& r, const std::vector<std::string>& names);

}  // namespace bvarkit
