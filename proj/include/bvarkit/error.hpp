#pragma once

#include <stdexcept>
#include <string>

namespace bvarkit {

/// Error kinds raised by the library. Each maps onto one pipeline stage.
enum class Errc {
  // ingestion / data validation
  bad_header,
  ragged_row,
  missing_value,
  non_numeric,
  duplicate_name,
  non_increasing_time,
  too_few_periods,
  zero_range,
  dimension_mismatch,
  // estimation
  invalid_argument,
  singular_design,
  degenerate_covariance,
  degenerate_scale,
  non_positive_dof,
  not_positive_definite,
  insufficient_sample,
  // diagnostics
  numerical_failure,
  // configuration / io
  config,
  io,
};

enum class Stage { ingestion, estimation, diagnostics, config, io };

constexpr Stage stage_of(Errc code) noexcept {
  switch (code) {
    case Errc::bad_header:
    case Errc::ragged_row:
    case Errc::missing_value:
    case Errc::non_numeric:
    case Errc::duplicate_name:
    case Errc::non_increasing_time:
    case Errc::too_few_periods:
    case Errc::zero_range:
    case Errc::dimension_mismatch:
      return Stage::ingestion;
    case Errc::numerical_failure:
      return Stage::diagnostics;
    case Errc::config:
      return Stage::config;
    case Errc::io:
      return Stage::io;
    default:
      return Stage::estimation;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }
  [[nodiscard]] Stage stage() const noexcept { return stage_of(code_); }

 private:
  Errc code_;
};

}  // namespace bvarkit
