#include "bvarkit/report.hpp"

#include "bvarkit/error.hpp"
#include "bvarkit/format.hpp"

#include "json.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace bvarkit {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(Errc::config, "config key '" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) config_error(prefix + key, "unknown key");
  }
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_string()) config_error(path, "expected a string");
  return v.get<std::string>();
}

int get_int(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  return v.get<int>();
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(path, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_boolean()) config_error(path, "expected a boolean");
  return v.get<bool>();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json estimate_json(const VarEstimate& est) {
  ordered_json j;
  j["source"] = to_string(est.source);
  j["lag_order"] = est.lag_order();
  j["constant"] = est.spec.constant;
  j["T_eff"] = est.T_eff;
  j["A"] = ordered_json::array();
  for (const auto& a : est.A) j["A"].push_back(matrix_json(a));
  j["c"] = std::vector<double>(est.c.begin(), est.c.end());
  j["Sigma"] = matrix_json(est.Sigma);
  j["logL"] = est.logL ? ordered_json(*est.logL) : ordered_json(nullptr);
  j["per_equation"] = ordered_json::array();
  for (const auto& e : est.per_equation) {
    j["per_equation"].push_back({{"r_squared", e.r_squared}, {"se_equation", e.se_equation}});
  }
  return j;
}

ordered_json stability_json(const StabilityReport& s) {
  ordered_json roots = ordered_json::array();
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    roots.push_back({{"real", s.roots[i].real()}, {"imaginary", s.roots[i].imag()}, {"modulus", s.moduli[i]}});
  }
  return {{"stable", s.stable}, {"max_modulus", s.max_modulus()}, {"roots", roots}};
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

}  // namespace

fs::path RunConfig::input_path() const {
  fs::path p(input);
  return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

fs::path RunConfig::output_path() const {
  fs::path p(output);
  return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(Errc::config, "config must be a JSON object");
  check_keys(root, "",
             {"input", "output", "target", "d_max", "d", "constant", "normalize", "hyper", "horizon",
              "orthogonalized", "settle_tolerance"});
  for (const char* key : {"input", "output", "target"}) {
    if (!root.contains(key)) config_error(key, "missing required key");
  }

  RunConfig c;
  c.input = get_string(root, "input", "input");
  c.output = get_string(root, "output", "output");
  c.target = get_string(root, "target", "target");
  if (root.contains("d_max")) c.max_lag = get_int(root, "d_max", "d_max");
  if (root.contains("d") && !root.at("d").is_null()) c.lag_order = get_int(root, "d", "d");
  if (root.contains("constant")) c.constant = get_bool(root, "constant", "constant");
  if (root.contains("normalize")) c.normalize = get_bool(root, "normalize", "normalize");
  if (root.contains("horizon")) c.horizon = get_int(root, "horizon", "horizon");
  if (root.contains("orthogonalized")) c.orthogonalized = get_bool(root, "orthogonalized", "orthogonalized");
  if (root.contains("settle_tolerance")) {
    c.settle_tolerance = get_number(root, "settle_tolerance", "settle_tolerance");
  }
  if (root.contains("hyper")) {
    const auto& h = root.at("hyper");
    if (!h.is_object()) config_error("hyper", "expected an object");
    check_keys(h, "hyper.", {"gamma", "decay", "cross_tightness", "constant_scale"});
    if (h.contains("gamma")) c.hyper.gamma = get_number(h, "gamma", "hyper.gamma");
    if (h.contains("decay")) c.hyper.decay_exponent = get_number(h, "decay", "hyper.decay");
    if (h.contains("cross_tightness")) {
      c.hyper.cross_tightness = get_number(h, "cross_tightness", "hyper.cross_tightness");
    }
    if (h.contains("constant_scale")) {
      c.hyper.constant_scale = get_number(h, "constant_scale", "hyper.constant_scale");
    }
  }

  if (c.target.empty()) config_error("target", "must not be empty");
  if (c.max_lag < 0) config_error("d_max", "must be >= 0");
  if (c.lag_order) {
    if (*c.lag_order < 1) config_error("d", "must be >= 1");
    if (*c.lag_order > c.max_lag) config_error("d", "must not exceed d_max");
  }
  if (c.horizon < 1) config_error("horizon", "must be >= 1");
  if (!(c.settle_tolerance > 0.0)) config_error("settle_tolerance", "must be positive");
  if (!(c.hyper.gamma > 0.0)) config_error("hyper.gamma", "must be positive");
  if (!(c.hyper.decay_exponent > 0.0)) config_error("hyper.decay", "must be positive");
  if (!(c.hyper.cross_tightness > 0.0 && c.hyper.cross_tightness <= 1.0)) {
    config_error("hyper.cross_tightness", "must lie in (0, 1]");
  }
  if (!(c.hyper.constant_scale > 0.0)) config_error("hyper.constant_scale", "must be positive");
  return c;
}

RunConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig c = parse_config(buf.str());
  c.base_dir = path.parent_path();
  return c;
}

namespace {

ordered_json config_ordered(const RunConfig& c) {
  ordered_json j;
  j["input"] = c.input;
  j["output"] = c.output;
  j["target"] = c.target;
  j["d_max"] = c.max_lag;
  j["d"] = c.lag_order ? ordered_json(*c.lag_order) : ordered_json(nullptr);
  j["constant"] = c.constant;
  j["normalize"] = c.normalize;
  j["hyper"] = {{"gamma", c.hyper.gamma},
                {"decay", c.hyper.decay_exponent},
                {"cross_tightness", c.hyper.cross_tightness},
                {"constant_scale", c.hyper.constant_scale}};
  j["horizon"] = c.horizon;
  j["orthogonalized"] = c.orthogonalized;
  j["settle_tolerance"] = c.settle_tolerance;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_ordered(config).dump(2) + "\n"; }

std::optional<Command> parse_command(std::string_view name) {
  if (name == "describe") return Command::describe;
  if (name == "select-lag") return Command::select_lag;
  if (name == "fit") return Command::fit;
  if (name == "stability") return Command::stability;
  if (name == "irf") return Command::irf;
  if (name == "report") return Command::report;
  return std::nullopt;
}

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::describe: return "describe";
    case Command::select_lag: return "select-lag";
    case Command::fit: return "fit";
    case Command::stability: return "stability";
    case Command::irf: return "irf";
    case Command::report: return "report";
  }
  return "?";
}

ReportBundle compute_bundle(const RunConfig& config, Command command, const SeriesPanel& raw_panel) {
  const auto at_least = [command](Command stage) {
    return static_cast<int>(command) >= static_cast<int>(stage);
  };
  ReportBundle b;
  b.config = config;
  b.started_at = utc_now();
  b.names = raw_panel.names();
  const auto target = raw_panel.index_of(config.target);
  if (!target) {
    throw Error(Errc::config, "config key 'target': variable '" + config.target + "' not in input header");
  }
  b.target_index = *target;
  b.summary = describe(raw_panel);
  if (!at_least(Command::select_lag)) return b;

  std::optional<SeriesPanel> scaled;
  if (config.normalize) {
    auto n = normalize(raw_panel);
    b.normalization = std::move(n.params);
    scaled = std::move(n.panel);
  }
  const SeriesPanel& panel = scaled ? *scaled : raw_panel;

  VarSpec base{1, config.constant, panel.names()};
  b.selection = select_lag(panel, base, config.max_lag);
  if (config.lag_order) {
    b.lag_order = *config.lag_order;
    b.lag_overridden = true;
  } else {
    b.lag_order = std::max(1, b.selection->winners.at(Criterion::aic));
  }
  if (!at_least(Command::fit)) return b;

  VarSpec spec{b.lag_order, config.constant, panel.names()};
  const DesignMatrices design = build_design(panel, spec.lag_order, spec.constant);
  try {
    b.ols = fit_ols(design, spec);
  } catch (const Error& e) {
    if (e.code() != Errc::singular_design) throw;
    b.ols_error = e.what();
  }
  b.bvar = fit_bvar_detailed(panel, spec, config.hyper);
  if (!at_least(Command::stability)) return b;

  if (b.ols) b.ols_stability = stability(*b.ols);
  b.bvar_stability = stability(b.bvar->estimate);
  b.headline_contrast = b.ols_stability && !b.ols_stability->stable && b.bvar_stability->stable;
  if (!at_least(Command::irf)) return b;

  b.impulse = irf(b.bvar->estimate, config.horizon, config.orthogonalized);
  for (int j = 0; j < panel.num_vars(); ++j) {
    if (j == b.target_index) continue;
    b.verdicts.push_back(classify_effect(*b.impulse, b.target_index, j, config.settle_tolerance));
  }
  return b;
}

std::string report_json(const ReportBundle& b) {
  ordered_json j;
  j["provenance"] = {{"tool", "bvarkit"},
                     {"version", kVersion},
                     {"started_at", b.started_at},
                     {"finished_at", b.finished_at},
                     {"config", config_ordered(b.config)}};
  j["manifest"] = b.manifest;
  j["variables"] = b.names;
  j["target"] = b.config.target;

  ordered_json summary = ordered_json::array();
  for (const auto& s : b.summary) {
    summary.push_back({{"name", s.name}, {"mean", s.mean}, {"median", s.median}, {"min", s.min},
                       {"max", s.max}, {"sd", s.sd}});
  }
  j["summary"] = summary;
  if (b.normalization) {
    ordered_json ranges = ordered_json::array();
    for (const auto& r : b.normalization->ranges()) ranges.push_back({{"min", r.min}, {"max", r.max}});
    j["normalization"] = ranges;
  } else {
    j["normalization"] = nullptr;
  }
  if (b.selection) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : b.selection->rows) {
      rows.push_back({{"lag", r.lag},
                      {"logL", r.logL},
                      {"lr", r.lr ? ordered_json(*r.lr) : ordered_json(nullptr)},
                      {"lr_reject", r.lr_reject ? ordered_json(*r.lr_reject) : ordered_json(nullptr)},
                      {"fpe", r.fpe},
                      {"aic", r.aic},
                      {"sic", r.sic},
                      {"hqic", r.hqic},
                      {"n_total", r.n_total},
                      {"n_per_eq", r.n_per_eq}});
    }
    ordered_json winners;
    for (const auto& [c, lag] : b.selection->winners) winners[to_string(c)] = lag;
    j["selection"] = {{"T_eff", b.selection->T_eff}, {"rows", rows}, {"winners", winners}};
  }
  j["lag_order"] = b.lag_order;
  j["lag_order_overridden"] = b.lag_overridden;
  if (b.ols) j["ols"] = estimate_json(*b.ols);
  if (!b.ols_error.empty()) j["ols_error"] = b.ols_error;
  if (b.bvar) {
    auto e = estimate_json(b.bvar->estimate);
    const auto& h = b.bvar->prior.hyper;
    e["hyper"] = {{"gamma", h.gamma}, {"decay", h.decay_exponent}, {"cross_tightness", h.cross_tightness},
                  {"constant_scale", h.constant_scale}};
    e["ar_scales"] = std::vector<double>(b.bvar->scales.s.begin(), b.bvar->scales.s.end());
    e["sigma_from_ols"] = b.bvar->sigma_from_ols;
    j["bvar"] = e;
  }
  if (b.ols_stability) j["ols_stability"] = stability_json(*b.ols_stability);
  if (b.bvar_stability) j["bvar_stability"] = stability_json(*b.bvar_stability);
  j["headline_contrast"] = b.headline_contrast;
  if (b.impulse) {
    const auto& ir = *b.impulse;
    ordered_json resp = ordered_json::array();
    ordered_json cum = ordered_json::array();
    for (int h = 0; h <= ir.horizon; ++h) {
      resp.push_back(matrix_json(ir.psi[h].row(b.target_index)).at(0));
      cum.push_back(matrix_json(ir.cumulative[h].row(b.target_index)).at(0));
    }
    j["irf"] = {{"horizon", ir.horizon},
                {"orthogonalized", ir.orthogonalized},
                {"shock_scale", ir.shock_scale == ShockScale::unit ? "unit" : "one-sd-cholesky"},
                {"target_response", resp},
                {"target_cumulative", cum}};
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : b.verdicts) {
      verdicts.push_back({{"source", b.names[v.source]},
                          {"target", b.names[v.target]},
                          {"direction", to_string(v.direction)},
                          {"share_positive", v.share_positive},
                          {"peak_period", v.peak_period},
                          {"settle_period", v.settle_period ? ordered_json(*v.settle_period) : ordered_json(nullptr)}});
    }
    j["verdicts"] = verdicts;
  }
  return j.dump(2) + "\n";
}

std::vector<OutputFile> render_outputs(const ReportBundle& b, Command command) {
  std::vector<OutputFile> files;
  const bool all = command == Command::report;
  if (all || command == Command::describe) {
    files.push_back({"describe.csv", render([&](std::ostream& out) {
                       out << "variable,mean,median,min,max,sd\n";
                       for (const auto& s : b.summary) {
                         out << s.name << ',' << format_double(s.mean) << ',' << format_double(s.median) << ','
                             << format_double(s.min) << ',' << format_double(s.max) << ','
                             << format_double(s.sd) << '\n';
                       }
                     })});
  }
  if ((all || command == Command::select_lag) && b.selection) {
    files.push_back({"selection.csv", render([&](std::ostream& out) { write_selection_csv(out, *b.selection); })});
  }
  if (all || command == Command::fit) {
    if (b.ols) {
      files.push_back({"coefficients_ols.csv",
                       render([&](std::ostream& out) { write_coefficients_csv(out, *b.ols, b.names); })});
    }
    if (b.bvar) {
      files.push_back({"coefficients_bvar.csv", render([&](std::ostream& out) {
                         write_coefficients_csv(out, b.bvar->estimate, b.names);
                       })});
    }
  }
  if (all || command == Command::stability) {
    if (b.ols_stability) {
      files.push_back({"roots_ols.csv", render([&](std::ostream& out) { write_roots_csv(out, *b.ols_stability); })});
    }
    if (b.bvar_stability) {
      files.push_back(
          {"roots_bvar.csv", render([&](std::ostream& out) { write_roots_csv(out, *b.bvar_stability); })});
    }
  }
  if ((all || command == Command::irf) && b.impulse) {
    files.push_back({"irf.csv", render([&](std::ostream& out) { write_irf_csv(out, *b.impulse, b.names); })});
    files.push_back(
        {"verdicts.csv", render([&](std::ostream& out) { write_verdicts_csv(out, b.verdicts, b.names); })});
  }
  return files;
}

void write_atomically(const fs::path& dir, const std::vector<OutputFile>& files) {
  static std::atomic<unsigned> counter{0};
  const fs::path target = fs::absolute(dir).lexically_normal();
  const fs::path parent = target.has_filename() ? target.parent_path() : target.parent_path().parent_path();
  const std::string leaf = target.has_filename() ? target.filename().string() : target.parent_path().filename().string();
  const fs::path staging =
      parent / ("." + leaf + ".staging-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));

  std::error_code ec;
  auto fail = [&](const std::string& what) {
    std::error_code ignore;
    fs::remove_all(staging, ignore);
    throw Error(Errc::io, what);
  };
  if (!fs::create_directories(parent, ec) && ec) fail("cannot create '" + parent.string() + "': " + ec.message());
  if (!fs::create_directory(staging, ec)) {
    fail("cannot create staging directory in '" + parent.string() + "': " + ec.message());
  }
  for (const auto& f : files) {
    std::ofstream out(staging / f.name, std::ios::binary);
    out << f.contents;
    out.close();
    if (!out) fail("cannot write '" + (staging / f.name).string() + "'");
  }
  fs::create_directories(target, ec);
  if (ec || !fs::is_directory(target)) fail("cannot create output directory '" + target.string() + "'");
  for (const auto& f : files) {
    fs::rename(staging / f.name, target / f.name, ec);
    if (ec) fail("cannot move '" + f.name + "' into '" + target.string() + "': " + ec.message());
  }
  fs::remove_all(staging, ec);
}

ReportBundle run_command(const RunConfig& config, Command command) {
  const SeriesPanel panel = load_panel_file(config.input_path());
  ReportBundle b = compute_bundle(config, command, panel);
  std::vector<OutputFile> files = render_outputs(b, command);
  for (const auto& f : files) b.manifest.push_back(f.name);
  if (command == Command::report) {
    b.manifest.push_back("report.json");
    b.finished_at = utc_now();
    files.push_back({"report.json", report_json(b)});
  }
  write_atomically(config.output_path(), files);
  return b;
}

ReportBundle run_pipeline(const RunConfig& config) { return run_command(config, Command::report); }

int exit_code_for(Stage stage) noexcept {
  switch (stage) {
    case Stage::config: return 2;
    case Stage::ingestion: return 3;
    case Stage::estimation: return 4;
    case Stage::diagnostics: return 5;
    case Stage::io: return 6;
  }
  return 1;
}

}  // namespace bvarkit
