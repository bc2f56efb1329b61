#include "plasmonq/counting.hpp"

#include "plasmonq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace plasmonq {

void SourceParams::validate() const {
  if (!(pair_rate > 0.0) || !std::isfinite(pair_rate))
    throw ConfigError("source.pair_rate must be > 0");
  if (!(integration_time > 0.0) || !std::isfinite(integration_time))
    throw ConfigError("source.integration_time must be > 0");
  if (!(channel_survival > 0.0 && channel_survival <= 1.0))
    throw ConfigError("source.channel_survival must lie in (0, 1]");
  if (!(accidental_rate >= 0.0) || !std::isfinite(accidental_rate))
    throw ConfigError("source.accidental_rate must be >= 0");
}

double expected_count(const SourceParams& source, double p_cc) {
  if (!(p_cc >= 0.0 && p_cc <= 1.0)) throw ConfigError("coincidence probability outside [0, 1]");
  return source.pair_rate * source.channel_survival * source.integration_time * p_cc +
         source.accidental_rate * source.integration_time;
}

std::uint64_t poisson_draw(std::uint64_t seed, std::uint64_t index, double mu) {
  if (mu <= 0.0) return 0;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 engine(seq);
  std::poisson_distribution<long long> dist(mu);
  return static_cast<std::uint64_t>(dist(engine));
}

std::vector<CountRecord> sample_counts(const SourceParams& source,
                                       const std::vector<AngleSetting>& settings,
                                       const ChannelParams& channel, unsigned threads) {
  source.validate();
  channel.validate();
  if (settings.empty()) throw ConfigError("sample_counts needs at least one setting");

  std::vector<CountRecord> out(settings.size());
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double p = coincidence_probability(channel, settings[i].to_radians());
      const double mu = expected_count(source, p);
      out[i] = {settings[i].alpha_deg, settings[i].beta_deg, source.integration_time,
                poisson_draw(source.seed, i, mu)};
    }
  };

  const std::size_t n = settings.size();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, n);
  if (workers == 1) {
    fill(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
  }
  return out;
}

std::vector<AngleSetting> chsh_settings(const ChshAngles& chsh) {
  std::vector<AngleSetting> out;
  out.reserve(16);
  for (double a : {chsh.a1, chsh.a2}) {
    for (double b : {chsh.b1, chsh.b2}) {
      out.push_back({a, b});
      out.push_back({a + 90.0, b});
      out.push_back({a, b + 90.0});
      out.push_back({a + 90.0, b + 90.0});
    }
  }
  return out;
}

std::vector<AngleSetting> standard_settings(const SweepSpec& sweep, const ChshAngles& chsh) {
  if (!(sweep.alpha_step_deg > 0.0) || sweep.alpha_step_deg > 360.0)
    throw ConfigError("sweep.alpha_step must lie in (0, 360]");
  std::vector<AngleSetting> out;
  const auto steps = static_cast<std::size_t>(std::ceil(360.0 / sweep.alpha_step_deg - 1e-9));
  for (double beta : sweep.beta_list_deg) {
    for (std::size_t k = 0; k < steps; ++k) {
      out.push_back({static_cast<double>(k) * sweep.alpha_step_deg, beta});
    }
  }
  const auto chsh_part = chsh_settings(chsh);
  out.insert(out.end(), chsh_part.begin(), chsh_part.end());
  return out;
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "calibration") return ScenarioKind::kCalibration;
  if (name == "holearray-air") return ScenarioKind::kHoleArrayAir;
  if (name == "holearray-silicon") return ScenarioKind::kHoleArraySilicon;
  if (name == "custom") return ScenarioKind::kCustom;
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected calibration, holearray-air, holearray-silicon or custom)");
}

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kCalibration: return "calibration";
    case ScenarioKind::kHoleArrayAir: return "holearray-air";
    case ScenarioKind::kHoleArraySilicon: return "holearray-silicon";
    case ScenarioKind::kCustom: return "custom";
  }
  return "custom";
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ScenarioKind::kCalibration:
    case ScenarioKind::kCustom:
      cfg.channel = ChannelParams::balanced(0.99);
      break;
    case ScenarioKind::kHoleArrayAir:
      // photon-like plasmons: no decoherence beyond the source, moderate loss
      cfg.channel = ChannelParams::balanced(0.99);
      cfg.source.channel_survival = 0.05;
      break;
    case ScenarioKind::kHoleArraySilicon:
      cfg.channel = ChannelParams::balanced(0.98);
      cfg.source.channel_survival = 0.01;
      cfg.source.integration_time = 20.0;
      break;
  }
  return cfg;
}

ScenarioRun run_scenario(const ScenarioConfig& config) {
  ScenarioRun run;
  run.settings = standard_settings(config.sweep, config.chsh);
  run.records = sample_counts(config.source, run.settings, config.channel, config.threads);
  return run;
}

}  // namespace plasmonq
