#pragma once

#include "plasmonq/config.hpp"
#include "plasmonq/dispersion.hpp"
#include "plasmonq/estimation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace plasmonq {

std::string_view tool_version();

struct FringeResult {
  FringeFit fit;
  VisibilityEstimate visibility;
};

struct SummaryReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string counts_hash;  // FNV-1a of the canonical counts CSV
  VisibilityEstimate primary;  // beta = 45 deg sweep (135 deg if 45 is absent)
  std::vector<FringeResult> fringes;
  ChshResult chsh;
  double violation_k = 3.0;
  double n_sigma = 1.0;
  std::optional<DephasingBound> dephasing;  // empty when no bound is derivable
  Timescales timescales;
  TimescaleInputs timescale_inputs;
};

/// Summary JSON; statistics rounded to 6 significant digits, keys sorted.
std::string summary_to_json(const SummaryReport& report);

/// Estimation shared by simulate and analyze: fringe fits for every sweep
/// beta present in the data, visibility, CHSH S and the dephasing bound.
SummaryReport analyze_records(const std::vector<CountRecord>& records, const ExperimentConfig& config);

struct SimulationOutput {
  std::vector<CountRecord> records;
  SummaryReport summary;
  std::string counts_csv;
  std::string fringes_csv;
  std::string summary_json;
};

SimulationOutput cmd_simulate(const ExperimentConfig& config);
SummaryReport cmd_analyze(const std::vector<CountRecord>& records, const ExperimentConfig& config);

struct InterfaceReport {
  double eps_d = 0.0;  // Re eps of the dielectric at the report wavelength
  Complex k;
  double v_g = 0.0;
  std::optional<double> l_prop;  // empty for lossless metals
};

struct DispersionOutput {
  std::vector<BandPoint> band;
  std::vector<EotResonance> resonances;
  InterfaceReport reference;   // gold / air by default
  InterfaceReport dielectric;  // gold / a-Si by default
  double group_velocity_ratio = 0.0;  // v_g(reference) / v_g(dielectric)
  double wavevector_ratio = 0.0;      // Re k(dielectric) / Re k(reference)
  std::optional<Timescales> computed;  // from the computed v_g and propagation length
  Timescales nominal;   // from config.timescales
  std::string band_csv;
  std::string eot_csv;
  std::string report_json;
};

DispersionOutput cmd_dispersion(const ExperimentConfig& config);

void write_outputs(const std::filesystem::path& dir, const SimulationOutput& out);
void write_outputs(const std::filesystem::path& dir, const DispersionOutput& out);

}  // namespace plasmonq
