// Command-line front end: bvarkit <subcommand> --config <path> [--output-dir <path>]

#include "bvarkit/error.hpp"
#include "bvarkit/format.hpp"
#include "bvarkit/report.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

const char* stage_name(bvarkit::Stage s) {
  switch (s) {
    case bvarkit::Stage::ingestion: return "ingestion";
    case bvarkit::Stage::estimation: return "estimation";
    case bvarkit::Stage::diagnostics: return "diagnostics";
    case bvarkit::Stage::config: return "config";
    case bvarkit::Stage::io: return "io";
  }
  return "?";
}

void print_summary(const bvarkit::ReportBundle& b, bvarkit::Command cmd) {
  using bvarkit::format_double;
  if (b.selection && cmd != bvarkit::Command::describe) {
    std::cout << "lag order: " << b.lag_order << (b.lag_overridden ? " (override)" : " (AIC)") << '\n';
  }
  if (!b.ols_error.empty()) std::cout << "OLS branch skipped: " << b.ols_error << '\n';
  if (b.ols_stability) {
    std::cout << "OLS  max root modulus " << format_double(b.ols_stability->max_modulus())
              << (b.ols_stability->stable ? " (stable)" : " (unstable)") << '\n';
  }
  if (b.bvar_stability) {
    std::cout << "BVAR max root modulus " << format_double(b.bvar_stability->max_modulus())
              << (b.bvar_stability->stable ? " (stable)" : " (unstable)") << '\n';
  }
  if (b.headline_contrast) std::cout << "OLS VAR unstable while BVAR stable\n";
  for (const auto& v : b.verdicts) {
    std::cout << b.names[v.source] << " -> " << b.names[v.target] << ": " << to_string(v.direction)
              << " (share positive " << format_double(v.share_positive) << ")\n";
  }
  for (const auto& f : b.manifest) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and Minnesota-prior Bayesian VAR toolkit"};
  app.set_version_flag("--version", bvarkit::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  for (const char* name : {"describe", "select-lag", "fit", "stability", "irf", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--output-dir", output_dir, "override the config's output directory");
  }
  CLI11_PARSE(app, argc, argv);

  const auto command = bvarkit::parse_command(app.get_subcommands().front()->get_name());
  try {
    bvarkit::RunConfig config = bvarkit::load_config_file(config_path);
    if (!output_dir.empty()) config.output = std::filesystem::absolute(output_dir).string();
    const auto bundle = bvarkit::run_command(config, *command);
    print_summary(bundle, *command);
  } catch (const bvarkit::Error& e) {
    std::cerr << "error [" << stage_name(e.stage()) << "]: " << e.what() << '\n';
    return bvarkit::exit_code_for(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
