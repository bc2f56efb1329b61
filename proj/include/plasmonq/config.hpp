#pragma once

#include "plasmonq/counting.hpp"
#include "plasmonq/dispersion.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace plasmonq {

inline constexpr int kConfigSchemaVersion = 1;

struct AnalysisParams {
  double n_sigma = 1.0;      // sigma multiplier for the dephasing bound
  double violation_k = 3.0;  // Bell violation requires S - 2 > k sigma_S
};

/// Inputs to the propagation / absorption time estimates.
struct TimescaleInputs {
  double group_velocity_c = 0.05;
  std::optional<double> hop_distance_um;  // defaults to period * sqrt(2)
  double absorption_length_um = 0.15;
};

struct DispersionParams {
  double wavelength_nm = 812.0;
  double delta_nm = 1.0;
  double energy_min_ev = 1.0;
  double energy_max_ev = 2.0;
  int energy_points = 201;
  double search_min_nm = 600.0;
  double search_max_nm = 1000.0;
};

struct ExperimentConfig {
  ScenarioConfig scenario = ScenarioConfig::defaults(ScenarioKind::kCalibration);
  AnalysisParams analysis;
  TimescaleInputs timescales;
  MaterialModel metal = MaterialModel::gold();
  MaterialModel dielectric = MaterialModel::constant({15.0, 0.0});
  MaterialModel reference_dielectric = MaterialModel::constant({1.0, 0.0});
  double period_nm = 850.0;
  int max_order = 8;
  DispersionParams dispersion;

  /// Canonical JSON of the effective configuration and its FNV-1a hash.
  std::string canonical_json;
  std::string config_hash;

  HoleArraySpec hole_array() const;
  double hop_distance_um() const;
  std::uint64_t seed() const { return scenario.source.seed; }
};

/// Parses and validates a JSON config. `origin` names the document in error
/// messages and relative table paths resolve against `base_dir`. A seed
/// override replaces the document's seed before hashing.
ExperimentConfig parse_config(std::string_view text, const std::string& origin = "config",
                              const std::filesystem::path& base_dir = {},
                              std::optional<std::uint64_t> seed_override = std::nullopt);

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

/// Defaults for a scenario, as if parsed from {"scenario": name}.
ExperimentConfig default_config(std::string_view scenario = "calibration",
                                std::optional<std::uint64_t> seed_override = std::nullopt);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace plasmonq
