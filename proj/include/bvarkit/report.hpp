#pragma once

#include "bvarkit/dynamics.hpp"
#include "bvarkit/error.hpp"
#include "bvarkit/lag_select.hpp"
#include "bvarkit/minnesota.hpp"
#include "bvarkit/series.hpp"
#include "bvarkit/var_ols.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bvarkit {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string input;
  std::string output;
  std::string target;
  int max_lag = 4;
  std::optional<int> lag_order;  // overrides the selected order when set
  bool constant = true;
  bool normalize = true;
  MinnesotaHyper hyper;
  int horizon = 50;
  bool orthogonalized = false;
  double settle_tolerance = 1e-3;

  /// Relative `input` / `output` paths resolve against this directory.
  std::filesystem::path base_dir;

  [[nodiscard]] std::filesystem::path input_path() const;
  [[nodiscard]] std::filesystem::path output_path() const;
};

/**
 * Parse a JSON run configuration. Required keys: input, output, target.
 * Unknown keys, type mismatches and out-of-range values throw Errc::config
 * with the key path (e.g. `hyper.gamma`) in the message.
 */
[[nodiscard]] RunConfig parse_config(std::string_view json_text);
[[nodiscard]] RunConfig load_config_file(const std::filesystem::path& path);

/// Canonical JSON echo of a config (all keys, defaults filled, 2-space indent).
[[nodiscard]] std::string config_to_json(const RunConfig& config);

enum class Command { describe, select_lag, fit, stability, irf, report };

[[nodiscard]] std::optional<Command> parse_command(std::string_view name);
[[nodiscard]] const char* to_string(Command c) noexcept;

struct OutputFile {
  std::string name;
  std::string contents;
};

struct ReportBundle {
  RunConfig config;
  std::vector<std::string> names;
  std::vector<VariableSummary> summary;
  std::optional<NormalizationParams> normalization;
  std::optional<SelectionTable> selection;
  int lag_order = 0;
  bool lag_overridden = false;
  std::optional<VarEstimate> ols;
  std::string ols_error;  // set when the OLS branch failed (e.g. rank-deficient design)
  std::optional<BvarFit> bvar;
  std::optional<StabilityReport> ols_stability;
  std::optional<StabilityReport> bvar_stability;
  std::optional<ImpulseResponse> impulse;
  std::vector<EffectVerdict> verdicts;
  int target_index = 0;
  bool headline_contrast = false;  // OLS unstable while BVAR stable
  std::vector<std::string> manifest;
  std::string started_at;
  std::string finished_at;
};

/// Run the pipeline stages needed by `command` without touching the filesystem output.
[[nodiscard]] ReportBundle compute_bundle(const RunConfig& config, Command command,
                                          const SeriesPanel& raw_panel);

/// Render the files written by `command`, in manifest order.
[[nodiscard]] std::vector<OutputFile> render_outputs(const ReportBundle& bundle, Command command);

/// Full report JSON (includes a provenance block with the config echo and timestamps).
[[nodiscard]] std::string report_json(const ReportBundle& bundle);

/**
 * Write `files` into `dir` via a staging directory next to it; files appear
 * only after every one has been written. Throws Errc::io and removes the
 * staging directory on failure.
 */
void write_atomically(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

/// Load input, compute, and write the outputs for `command`.
ReportBundle run_command(const RunConfig& config, Command command);

/// Same as run_command(config, Command::report).
ReportBundle run_pipeline(const RunConfig& config);

/// Process exit code for an error stage (0 is reserved for success).
[[nodiscard]] int exit_code_for(Stage stage) noexcept;

}  // namespace bvarkit
