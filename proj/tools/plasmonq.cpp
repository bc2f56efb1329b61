// plasmonq: simulate, analyze and dispersion commands.
//
// Exit codes: 0 success, 1 usage, 2 configuration error, 3 data error,
// 4 numerical failure.

#include "plasmonq/config.hpp"
#include "plasmonq/errors.hpp"
#include "plasmonq/pipeline.hpp"
#include "plasmonq/records_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kNumerical = 4 };

plasmonq::ExperimentConfig resolve_config(const std::string& path, std::optional<std::uint64_t> seed) {
  if (path.empty()) return plasmonq::default_config("calibration", seed);
  return plasmonq::load_config(path, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled-photon plasmonic channel simulator and analysis tools"};
  app.set_version_flag("--version", std::string(plasmonq::tool_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string counts_path;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file (defaults: calibration scenario)");
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate coincidence counts and estimate V and S");
  add_common(simulate);
  simulate->add_option("--seed", seed, "Override the configured RNG seed");

  auto* analyze = app.add_subcommand("analyze", "Estimate V and S from a counts CSV");
  add_common(analyze);
  analyze->add_option("--counts", counts_path, "Counts CSV (alpha_deg,beta_deg,time_s,counts)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--seed", seed, "Seed recorded in the summary");

  auto* dispersion = app.add_subcommand("dispersion", "SPP dispersion, EOT resonances and timescales");
  add_common(dispersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const auto config = resolve_config(config_path, seed);
    if (simulate->parsed()) {
      const auto out = plasmonq::cmd_simulate(config);
      plasmonq::write_outputs(out_dir, out);
      std::cout << out.summary_json;
    } else if (analyze->parsed()) {
      const auto records = plasmonq::parse_counts_csv(plasmonq::read_text_file(counts_path));
      const auto summary = plasmonq::cmd_analyze(records, config);
      const auto json = plasmonq::summary_to_json(summary);
      std::filesystem::create_directories(out_dir);
      plasmonq::write_text_file(std::filesystem::path(out_dir) / "summary.json", json);
      std::cout << json;
    } else if (dispersion->parsed()) {
      const auto out = plasmonq::cmd_dispersion(config);
      plasmonq::write_outputs(out_dir, out);
      std::cout << out.report_json;
    }
  } catch (const plasmonq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const plasmonq::RangeError& e) {
    std::cerr << "data error: " << e.what() << " (wavelength " << e.wavelength_nm() << " nm)\n";
    return kData;
  } catch (const plasmonq::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const plasmonq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}
