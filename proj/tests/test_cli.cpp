#include "oracles.hpp"
#include "plasmonq/config.hpp"
#include "plasmonq/errors.hpp"
#include "plasmonq/pipeline.hpp"
#include "plasmonq/records_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

using namespace plasmonq;
namespace fs = std::filesystem;

namespace {

std::string error_of(std::string_view text) {
  try {
    (void)parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("plasmonq_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PLASMONQ_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read(const fs::path& p) { return read_text_file(p); }

}  // namespace

TEST_CASE("config errors carry line numbers") {
  CHECK(contains(error_of("{\n  \"scenario\": \"calibration\",\n  \"sed\": 4\n}"), "cfg.json:3"));
  CHECK(contains(error_of("{\n  \"scenario\": \"holearray-glass\"\n}"), "cfg.json:2"));
  CHECK(contains(error_of("{\n  \"channel\": {\n    \"env_overlap\": 1.5\n  }\n}"), "cfg.json:3"));
  CHECK(contains(error_of("{\n  \"source\": {\n    \"integration_time_s\": -1\n  }\n}"), "cfg.json:3"));
  CHECK(contains(error_of("{\n  \"seed\": 1,\n  \"scenario\" \"x\"\n}"), "cfg.json:3"));
  CHECK(contains(error_of("{\"sweep\": {\"alpha_step_deg\": 120}}"), "sweep"));
  CHECK(error_of("{\"scenario\": \"holearray-air\", \"seed\": 5}").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/plasmonq.json"), ConfigError);
}

TEST_CASE("config values and hashing") {
  const auto cfg = parse_config(R"({
    "scenario": "custom",
    "seed": 7,
    "threads": 2,
    "channel": {"h": 1, "v": {"abs": 0.5, "phase_deg": 90}, "env_overlap": {"re": 0.3, "im": 0.4}},
    "materials": {"metal": "gold-drude", "dielectric_eps": 12.25}
  })");
  CHECK(cfg.scenario.kind == ScenarioKind::kCustom);
  CHECK(cfg.seed() == 7);
  CHECK(cfg.scenario.threads == 2);
  CHECK(std::abs(cfg.scenario.channel.v - Complex(0.0, 0.5)) < 1e-12);
  CHECK(std::abs(cfg.scenario.channel.env_overlap - Complex(0.3, 0.4)) < 1e-12);
  CHECK(cfg.dielectric.permittivity(812.0).real() == 12.25);
  CHECK(cfg.hop_distance_um() == doctest::Approx(0.85 * std::numbers::sqrt2));

  const auto a = default_config("calibration", 1);
  const auto b = default_config("calibration", 2);
  CHECK(a.config_hash != b.config_hash);
  CHECK(a.config_hash == default_config("calibration", 1).config_hash);
  CHECK(parse_config("{\"seed\": 1, \"threads\": 4}").config_hash == a.config_hash);
  CHECK(parse_config("{\"seed\": 9}", "c", {}, 1).config_hash == a.config_hash);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("counts CSV round trip") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> tenths(0, 3599);
  std::uniform_int_distribution<std::uint64_t> counts(0, 1u << 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CountRecord> recs;
    for (int i = 0; i < 40; ++i)
      recs.push_back({tenths(rng) / 10.0, tenths(rng) / 10.0, (1 + tenths(rng)) / 7.0, counts(rng)});
    const auto text = format_counts_csv(recs);
    CHECK(parse_counts_csv(text) == recs);
    CHECK(format_counts_csv(parse_counts_csv(text)) == text);
  }
}

TEST_CASE("counts CSV schema errors") {
  CHECK_THROWS_AS(parse_counts_csv("alpha,beta,time_s,counts\n0,0,1,5\n"), DataError);
  CHECK_THROWS_AS(parse_counts_csv(""), DataError);
  CHECK_THROWS_AS(parse_counts_csv("alpha_deg,beta_deg,time_s,counts\n"), InsufficientDataError);
  CHECK_THROWS_AS(parse_counts_csv("alpha_deg,beta_deg,time_s,counts\n0,0,1,-5\n"), DataError);
  CHECK_THROWS_AS(parse_counts_csv("alpha_deg,beta_deg,time_s,counts\n0,0,0,5\n"), DataError);
  try {
    (void)parse_counts_csv("alpha_deg,beta_deg,time_s,counts\n0,0,1,5\n10,0,1\n");
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(contains(e.what(), "line 3"));
  }
}

TEST_CASE("simulate: calibration and dispersive sample") {
  const auto cal = cmd_simulate(default_config("calibration", 0));
  CHECK(cal.records.size() == 160);
  CHECK(cal.summary.primary.v >= 0.97);
  CHECK(cal.summary.primary.v <= 1.0);
  CHECK(cal.summary.chsh.s >= 2.74);
  CHECK(cal.summary.chsh.s <= 2.84);
  CHECK(cal.summary.chsh.bell_violation);
  CHECK(cal.counts_csv.rfind(std::string(kCountsHeader), 0) == 0);
  CHECK(cal.fringes_csv.rfind(std::string(kFringeHeader), 0) == 0);

  const auto si = cmd_simulate(default_config("holearray-silicon", 0));
  CHECK(si.summary.primary.v >= 0.94);
  CHECK(si.summary.primary.v <= 1.0);
  CHECK(si.summary.chsh.s >= 2.71);
  CHECK(si.summary.chsh.s <= 2.87);

  const auto json = nlohmann::json::parse(cal.summary_json);
  for (const char* key : {"V", "sigma_V", "S", "sigma_S", "E", "bell_violation", "t2star_bound_fs", "timescales",
                          "config_hash", "counts_hash", "seed", "scenario"})
    CHECK_MESSAGE(json.contains(key), key);
}

TEST_CASE("simulate: total decoherence is classical") {
  const auto out = cmd_simulate(parse_config(R"({"scenario": "custom", "channel": {"env_overlap": 0}})"));
  CHECK(out.summary.primary.v < 0.05);
  CHECK(out.summary.chsh.s < 2.0);
  CHECK_FALSE(out.summary.chsh.bell_violation);
}

TEST_CASE("analyze reproduces the simulate summary") {
  const auto cfg = default_config("holearray-silicon", 12);
  const auto sim = cmd_simulate(cfg);
  const auto again = summary_to_json(cmd_analyze(parse_counts_csv(sim.counts_csv), cfg));
  CHECK(again == sim.summary_json);
}

TEST_CASE("analyze noiseless Bell-state counts") {
  const auto cfg = default_config("calibration", 0);
  const auto id = ChannelParams::identity();
  std::vector<CountRecord> recs;
  for (const auto& s : standard_settings(cfg.scenario.sweep, cfg.scenario.chsh)) {
    const double p = oracle::probability(id, s.alpha_deg * std::numbers::pi / 180.0,
                                         s.beta_deg * std::numbers::pi / 180.0);
    recs.push_back({s.alpha_deg, s.beta_deg, 1.0, static_cast<std::uint64_t>(std::llround(1e12 * p))});
  }
  const auto summary = cmd_analyze(recs, cfg);
  CHECK(summary.primary.v == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(summary.chsh.s == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-6));
  CHECK(summary.dephasing.has_value());

  std::vector<CountRecord> three{{0, 45, 1, 10}, {30, 45, 1, 20}, {60, 45, 1, 30}};
  CHECK_THROWS_AS(cmd_analyze(three, cfg), InsufficientDataError);
}

TEST_CASE("dispersion command") {
  const auto out = cmd_dispersion(default_config());
  CHECK(out.dielectric.v_g == doctest::Approx(0.05).epsilon(0.3));
  CHECK(out.wavevector_ratio == doctest::Approx(6.0).epsilon(0.25));
  CHECK(out.nominal.t_p == doctest::Approx(80.0).epsilon(0.05));
  CHECK(out.nominal.t2 == doctest::Approx(20.0).epsilon(0.01));
  CHECK(out.dielectric.l_prop.has_value());
  CHECK(out.band.size() == 201);
  CHECK(out.band_csv.rfind(std::string(kBandHeader), 0) == 0);
  const auto report = nlohmann::json::parse(out.report_json);
  CHECK(report.contains("eot_resonances"));

  const auto pec = cmd_dispersion(parse_config(R"({
    "materials": {"metal": "perfect-conductor", "dielectric_eps": 1},
    "dispersion": {"search_range_nm": [500, 1000]}
  })"));
  const double g = 2.0 * std::numbers::pi / 0.85;
  for (const auto& p : pec.band) {
    const double light = 2.0 * std::numbers::pi * 1000.0 * p.energy / 1239.842;
    CHECK(p.folded.k == doctest::Approx(std::abs(light - std::round(light / g) * g)).epsilon(1e-6));
  }
  CHECK_FALSE(pec.dielectric.l_prop.has_value());

  CHECK_THROWS_AS(cmd_dispersion(parse_config(R"({"dispersion": {"energy_min_ev": 0.5}})")), RangeError);
}

TEST_CASE("command line exit codes and reproducible outputs") {
  const auto dir = scratch_dir("cli");
  const auto cfg = dir / "cal.json";
  write_text_file(cfg, R"({"scenario": "calibration", "seed": 3, "threads": 1})");
  const auto cfg4 = dir / "cal4.json";
  write_text_file(cfg4, R"({"scenario": "calibration", "seed": 3, "threads": 4})");

  CHECK(run_cli("simulate --config " + cfg.string() + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " + (dir / "b").string()) == 0);
  CHECK(run_cli("simulate --config " + cfg4.string() + " --out " + (dir / "c").string()) == 0);
  for (const char* file : {"counts.csv", "fringes.csv", "summary.json"}) {
    const auto a = read(dir / "a" / file);
    CHECK(!a.empty());
    CHECK(a == read(dir / "b" / file));
    CHECK(a == read(dir / "c" / file));
  }

  CHECK(run_cli("analyze --config " + cfg.string() + " --counts " + (dir / "a" / "counts.csv").string() +
                " --out " + (dir / "d").string()) == 0);
  CHECK(read(dir / "d" / "summary.json") == read(dir / "a" / "summary.json"));

  CHECK(run_cli("dispersion --out " + (dir / "e").string()) == 0);
  CHECK(run_cli("dispersion --out " + (dir / "f").string()) == 0);
  for (const char* file : {"band.csv", "eot.csv", "dispersion.json"}) CHECK(read(dir / "e" / file) == read(dir / "f" / file));

  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("simulate --bogus") == 1);

  const auto bad = dir / "bad.json";
  write_text_file(bad, "{\n  \"scenario\": 3\n}");
  CHECK(run_cli("simulate --config " + bad.string() + " --out " + dir.string()) == 2);

  const auto counts = dir / "three.csv";
  write_text_file(counts, "alpha_deg,beta_deg,time_s,counts\n0,45,1,10\n30,45,1,20\n60,45,1,30\n");
  CHECK(run_cli("analyze --counts " + counts.string() + " --out " + (dir / "g").string()) == 3);
  const auto garbled = dir / "garbled.csv";
  write_text_file(garbled, "alpha_deg,beta_deg,time_s,counts\n0,45,1,ten\n");
  CHECK(run_cli("analyze --counts " + garbled.string() + " --out " + (dir / "g").string()) == 3);

  const auto range = dir / "range.json";
  write_text_file(range, R"({"dispersion": {"energy_min_ev": 0.5}})");
  CHECK(run_cli("dispersion --config " + range.string() + " --out " + (dir / "h").string()) == 3);

  const auto pole = dir / "pole.json";
  write_text_file(pole, R"({"materials": {"metal": {"constant": -15}}})");
  CHECK(run_cli("dispersion --config " + pole.string() + " --out " + (dir / "i").string()) == 4);

  fs::remove_all(dir);
}

TEST_CASE("shipped configs load") {
  for (const auto& entry : fs::directory_iterator(PLASMONQ_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    const auto cfg = load_config(entry.path());
    CHECK(cfg.config_hash.size() == 16);
  }
  CHECK(load_config(fs::path(PLASMONQ_CONFIG_DIR) / "holearray-silicon.json").config_hash ==
        default_config("holearray-silicon", 1).config_hash);
}
