#pragma once

#include "plasmonq/quantum_state.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plasmonq {

/// Source and acquisition parameters for the coincidence counter.
struct SourceParams {
  double pair_rate = 1e4;         // detected pairs / s at unit P_cc
  double integration_time = 10.0;  // s per setting
  double channel_survival = 1.0;   // survival of the plasmonic-path photon
  double accidental_rate = 0.0;    // accidental coincidences / s
  std::uint64_t seed = 0;

  void validate() const;
};

/// Polarizer setting in degrees, the unit used by configs and CSV files.
struct AngleSetting {
  double alpha_deg = 0.0;
  double beta_deg = 0.0;

  PolarizerPair to_radians() const { return PolarizerPair::from_degrees(alpha_deg, beta_deg); }
  bool operator==(const AngleSetting&) const = default;
};

/// One polarizer setting and the coincidences recorded there. Angles in degrees.
struct CountRecord {
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  double integration_time = 0.0;
  std::uint64_t counts = 0;

  bool operator==(const CountRecord&) const = default;
};

/// mu = pair_rate * survival * T * p_cc + accidental_rate * T.
double expected_count(const SourceParams& source, double p_cc);

/// Poisson draws, one per setting. Setting i draws from its own generator
/// seeded by (source.seed, i), so results do not depend on `threads`.
std::vector<CountRecord> sample_counts(const SourceParams& source,
                                       const std::vector<AngleSetting>& settings,
                                       const ChannelParams& channel, unsigned threads = 1);

/// Same substream rule as sample_counts, for callers that already know mu.
std::uint64_t poisson_draw(std::uint64_t seed, std::uint64_t index, double mu);

/// Analyzer angles (degrees from vertical) for the CHSH combination
/// S = E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2).
struct ChshAngles {
  double a1 = 0.0;
  double a2 = 45.0;
  double b1 = 22.5;
  double b2 = 67.5;
};

struct SweepSpec {
  std::vector<double> beta_list_deg{0.0, 45.0, 90.0, 135.0};
  double alpha_step_deg = 10.0;
};

/// Fringe sweep (alpha over [0, 360) for each beta) followed by the 16 CHSH settings.
std::vector<AngleSetting> standard_settings(const SweepSpec& sweep, const ChshAngles& chsh);

/// The 16 CHSH settings: for each (a, b) pair, (a,b), (a+90,b), (a,b+90), (a+90,b+90).
std::vector<AngleSetting> chsh_settings(const ChshAngles& chsh);

enum class ScenarioKind { kCalibration, kHoleArrayAir, kHoleArraySilicon, kCustom };

ScenarioKind parse_scenario(std::string_view name);
std::string_view scenario_name(ScenarioKind kind);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kCalibration;
  ChannelParams channel;
  SourceParams source;
  SweepSpec sweep;
  ChshAngles chsh;
  unsigned threads = 1;

  /// Built-in defaults for a named scenario.
  static ScenarioConfig defaults(ScenarioKind kind);
};

struct ScenarioRun {
  std::vector<AngleSetting> settings;
  std::vector<CountRecord> records;
};

/// Standard sweep plus CHSH settings, sampled with the scenario's source.
ScenarioRun run_scenario(const ScenarioConfig& config);

}  // namespace plasmonq
