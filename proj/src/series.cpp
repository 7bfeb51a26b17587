#include "bvarkit/series.hpp"

#include "bvarkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace bvarkit {
namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<long long> parse_integer(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Labels compare numerically when every label is an integer, lexicographically otherwise.
void check_increasing_times(const std::vector<std::string>& times) {
  std::vector<long long> numeric;
  numeric.reserve(times.size());
  for (const auto& t : times) {
    auto v = parse_integer(t);
    if (!v) {
      numeric.clear();
      break;
    }
    numeric.push_back(*v);
  }
  const bool use_numeric = numeric.size() == times.size();
  for (std::size_t i = 1; i < times.size(); ++i) {
    bool ok = use_numeric ? numeric[i - 1] < numeric[i] : times[i - 1] < times[i];
    if (!ok) {
      throw Error(Errc::non_increasing_time, "period labels must be strictly increasing: '" +
                                                 times[i - 1] + "' is followed by '" + times[i] +
                                                 "'");
    }
  }
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SeriesPanel::SeriesPanel(std::vector<std::string> names, std::vector<std::string> times,
                         Eigen::MatrixXd values)
    : names_(std::move(names)), times_(std::move(times)), values_(std::move(values)) {
  if (names_.empty()) throw Error(Errc::bad_header, "panel needs at least one variable");
  if (times_.size() < 2) {
    throw Error(Errc::too_few_periods,
                "panel needs at least 2 periods, got " + std::to_string(times_.size()));
  }
  if (values_.rows() != static_cast<Eigen::Index>(times_.size()) ||
      values_.cols() != static_cast<Eigen::Index>(names_.size())) {
    throw Error(Errc::dimension_mismatch, "value matrix shape does not match names x times");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw Error(Errc::duplicate_name, "duplicate variable name '" + n + "'");
  }
  check_increasing_times(times_);
  for (Eigen::Index t = 0; t < values_.rows(); ++t) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      if (!std::isfinite(values_(t, j))) {
        throw Error(Errc::missing_value, "non-finite value at period '" + times_[t] +
                                             "', variable '" + names_[j] + "'");
      }
    }
  }
}

std::optional<int> SeriesPanel::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

NormalizationParams::NormalizationParams(std::vector<ValueRange> ranges,
                                         std::vector<std::string> names)
    : ranges_(std::move(ranges)) {
  for (std::size_t j = 0; j < ranges_.size(); ++j) {
    if (!(ranges_[j].max > ranges_[j].min)) {
      std::string label = j < names.size() ? "'" + names[j] + "'" : "#" + std::to_string(j);
      throw Error(Errc::zero_range, "variable " + label + " has zero range (max = min = " +
                                        std::to_string(ranges_[j].min) + "); cannot normalize");
    }
  }
}

SeriesPanel load_panel(std::istream& source) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(source, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  // Strip a UTF-8 byte order mark.
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  if (header.size() < 2) {
    throw Error(Errc::bad_header, "header must be 'time,<name>,...' with at least one variable");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].empty()) {
      throw Error(Errc::bad_header, "empty variable name in header column " + std::to_string(j + 2));
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) throw Error(Errc::duplicate_name, "duplicate variable name '" + n + "'");
    }
  }

  const std::size_t ncols = header.size();
  std::vector<std::string> times;
  std::vector<double> flat;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != ncols) {
      throw Error(Errc::ragged_row, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(ncols) + " fields, got " +
                                        std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw Error(Errc::missing_value, "line " + std::to_string(line_no) + ": missing period label");
    }
    times.push_back(fields[0]);
    for (std::size_t j = 1; j < ncols; ++j) {
      const auto& cell = fields[j];
      if (cell.empty()) {
        throw Error(Errc::missing_value, "line " + std::to_string(line_no) + ", column '" +
                                             names[j - 1] + "': missing value");
      }
      double v = 0.0;
      const char* begin = cell.data();
      if (*begin == '+') ++begin;
      auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(Errc::non_numeric, "line " + std::to_string(line_no) + ", column '" +
                                           names[j - 1] + "': non-numeric value '" + cell + "'");
      }
      flat.push_back(v);
    }
  }
  if (times.size() < 2) {
    throw Error(Errc::too_few_periods,
                "panel needs at least 2 periods, got " + std::to_string(times.size()));
  }
  const auto T = static_cast<Eigen::Index>(times.size());
  const auto N = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd values =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), T, N);
  return SeriesPanel(std::move(names), std::move(times), std::move(values));
}

SeriesPanel load_panel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open input file '" + path.string() + "'");
  return load_panel(in);
}

NormalizedPanel normalize(const SeriesPanel& panel) {
  const auto& y = panel.values();
  std::vector<ValueRange> ranges;
  ranges.reserve(panel.num_vars());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    ranges.push_back({y.col(j).minCoeff(), y.col(j).maxCoeff()});
  }
  NormalizationParams params(std::move(ranges), panel.names());
  Eigen::MatrixXd scaled(y.rows(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const auto [lo, hi] = params.ranges()[j];
    scaled.col(j) = (y.col(j).array() - lo) / (hi - lo);
  }
  return {SeriesPanel(panel.names(), panel.times(), std::move(scaled)), std::move(params)};
}

SeriesPanel denormalize(const SeriesPanel& panel, const NormalizationParams& params) {
  if (params.size() != static_cast<std::size_t>(panel.num_vars())) {
    throw Error(Errc::dimension_mismatch, "normalization has " + std::to_string(params.size()) +
                                              " ranges but panel has " +
                                              std::to_string(panel.num_vars()) + " variables");
  }
  const auto& y = panel.values();
  Eigen::MatrixXd raw(y.rows(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const auto [lo, hi] = params.ranges()[j];
    raw.col(j) = y.col(j).array() * (hi - lo) + lo;
  }
  return SeriesPanel(panel.names(), panel.times(), std::move(raw));
}

DesignMatrices build_design(const SeriesPanel& panel, int lag_order, bool constant,
                            std::optional<int> common_max_lag) {
  const int T = panel.num_periods();
  const int N = panel.num_vars();
  if (lag_order < 1 || lag_order > T - 2) {
    throw Error(Errc::invalid_argument, "lag order " + std::to_string(lag_order) +
                                            " out of range [1, " + std::to_string(T - 2) + "]");
  }
  const int max_lag = common_max_lag.value_or(lag_order);
  if (max_lag < lag_order || max_lag > T - 2) {
    throw Error(Errc::invalid_argument, "common maximum lag " + std::to_string(max_lag) +
                                            " must lie in [" + std::to_string(lag_order) + ", " +
                                            std::to_string(T - 2) + "]");
  }

  DesignMatrices d;
  d.lag_order = lag_order;
  d.constant = constant;
  d.first_period = max_lag;
  if (constant) d.layout.push_back({Regressor::Kind::constant, -1, 0});
  for (int k = 1; k <= lag_order; ++k) {
    for (int j = 0; j < N; ++j) d.layout.push_back({Regressor::Kind::lag, j, k});
  }

  const int rows = T - max_lag;
  const auto& y = panel.values();
  d.Y = y.bottomRows(rows);
  d.X.resize(rows, static_cast<Eigen::Index>(d.layout.size()));
  const int offset = constant ? 1 : 0;
  if (constant) d.X.col(0).setOnes();
  for (int k = 1; k <= lag_order; ++k) {
    d.X.middleCols(offset + (k - 1) * N, N) = y.middleRows(max_lag - k, rows);
  }
  return d;
}

std::vector<VariableSummary> describe(const SeriesPanel& panel) {
  const auto& y = panel.values();
  const double T = static_cast<double>(y.rows());
  std::vector<VariableSummary> out;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    VariableSummary s;
    s.name = panel.names()[j];
    const auto col = y.col(j);
    s.mean = col.mean();
    s.min = col.minCoeff();
    s.max = col.maxCoeff();
    s.median = median_of(std::vector<double>(col.begin(), col.end()));
    s.sd = std::sqrt((col.array() - s.mean).square().sum() / (T - 1.0));
    out.push_back(std::move(s));
  }
  return out;
}

std::string regressor_label(const Regressor& r, const std::vector<std::string>& names) {
  if (r.kind == Regressor::Kind::constant) return "const";
  return names.at(r.variable) + "_lag" + std::to_string(r.lag);
}

}  // namespace bvarkit
