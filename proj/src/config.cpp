#include "plasmonq/config.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/text_format.hpp"
#include "plasmonq/units.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace plasmonq {
namespace {

using nlohmann::json;

/// Maps JSON paths back to source lines for error messages.
class Locator {
 public:
  Locator(std::string_view text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    const std::string key = path.substr(path.find_last_of('.') + 1);
    throw ConfigError(origin_ + ":" + std::to_string(line_of(key)) + ": " + path + ": " + message);
  }

  [[noreturn]] void fail_at_byte(std::size_t byte, const std::string& message) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text_.size()); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message);
  }

  // First line mentioning the quoted key; 1 when the key is absent (defaults).
  std::size_t line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string_view::npos) return 1;
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos; ++i)
      if (text_[i] == '\n') ++line;
    return line;
  }

 private:
  std::string_view text_;
  std::string origin_;
};

class Reader {
 public:
  Reader(const Locator& loc) : loc_(loc) {}

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) loc_.fail(path, "expected an object");
    for (const auto& [k, _] : obj.items()) {
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) loc_.fail(join(path, k), "unknown key");
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) loc_.fail(join(path, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) loc_.fail(join(path, key), "must be finite");
    return x;
  }

  Complex complex(const json& obj, const std::string& path, const char* key, Complex fallback) const {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const std::string p = join(path, key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_object() && v.contains("abs")) {
      only_keys(v, p, {"abs", "phase_deg"});
      return std::polar(number(v, p, "abs", 0.0), units::deg_to_rad(number(v, p, "phase_deg", 0.0)));
    }
    if (v.is_object()) {
      only_keys(v, p, {"re", "im"});
      return {number(v, p, "re", 0.0), number(v, p, "im", 0.0)};
    }
    loc_.fail(p, "expected a number, {abs, phase_deg} or {re, im}");
  }

  template <typename Fn>
  void check(const std::string& path, Fn&& fn) const {
    try {
      fn();
    } catch (const ConfigError& e) {
      loc_.fail(path, e.what());
    }
  }

  const Locator& loc() const { return loc_; }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  const Locator& loc_;
};

json complex_json(Complex c) {
  return {{"abs", std::abs(c)}, {"phase_deg", units::rad_to_deg(std::arg(c))}};
}

MaterialModel parse_material(const json& v, const std::string& path, const Reader& rd,
                             const std::filesystem::path& base_dir, json& canonical) {
  if (v.is_number()) {
    canonical = {{"constant", complex_json({v.get<double>(), 0.0})}};
    return MaterialModel::constant({v.get<double>(), 0.0});
  }
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    canonical = name;
    if (name == "gold") return MaterialModel::gold();
    if (name == "gold-drude") return MaterialModel::gold_drude();
    if (name == "perfect-conductor") return MaterialModel::perfect_conductor();
    rd.loc().fail(path, "unknown built-in material '" + name + "'");
  }
  if (v.is_object() && v.contains("table")) {
    rd.only_keys(v, path, {"table"});
    if (!v.at("table").is_string()) rd.loc().fail(path + ".table", "expected a file path");
    std::filesystem::path file = v.at("table").get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    std::ifstream in(file);
    if (!in) rd.loc().fail(path + ".table", "cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      auto rows = parse_optical_constants(ss.str());
      canonical = {{"table", v.at("table")}, {"table_hash", fnv1a_hex(ss.str())}};
      return MaterialModel::tabulated(std::move(rows), file.filename().string());
    } catch (const DataError& e) {
      rd.loc().fail(path + ".table", file.string() + ": " + e.what());
    }
  }
  if (v.is_object() && v.contains("drude")) {
    rd.only_keys(v, path, {"drude"});
    const auto& d = v.at("drude");
    const std::string p = path + ".drude";
    rd.only_keys(d, p, {"eps_inf", "omega_p_ev", "gamma_ev"});
    const double eps_inf = rd.number(d, p, "eps_inf", 1.0);
    const double wp = rd.number(d, p, "omega_p_ev", 0.0);
    const double g = rd.number(d, p, "gamma_ev", 0.0);
    canonical = {{"drude", {{"eps_inf", eps_inf}, {"omega_p_ev", wp}, {"gamma_ev", g}}}};
    std::optional<MaterialModel> m;
    rd.check(p, [&] { m = MaterialModel::drude(eps_inf, wp, g); });
    return *m;
  }
  if (v.is_object() && v.contains("constant")) {
    rd.only_keys(v, path, {"constant"});
    const Complex eps = rd.complex(v, path, "constant", {1.0, 0.0});
    canonical = {{"constant", complex_json(eps)}};
    return MaterialModel::constant(eps);
  }
  rd.loc().fail(path, "expected a built-in name, number, {table}, {drude} or {constant}");
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

HoleArraySpec ExperimentConfig::hole_array() const {
  return HoleArraySpec{period_nm, dielectric, metal, max_order};
}

double ExperimentConfig::hop_distance_um() const {
  return timescales.hop_distance_um.value_or(period_nm * std::numbers::sqrt2 / 1000.0);
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin,
                              const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  const Locator loc(text, origin);
  const Reader rd(loc);

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    loc.fail_at_byte(e.byte == 0 ? 0 : e.byte - 1, std::string("malformed JSON: ") + e.what());
  }
  rd.only_keys(doc, "", {"schema_version", "scenario", "seed", "threads", "channel", "source", "sweep",
                         "chsh_angles_deg", "analysis", "timescales", "materials", "hole_array",
                         "dispersion"});

  const double version = rd.number(doc, "", "schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion)
    loc.fail("schema_version", "unsupported schema version (expected " + std::to_string(kConfigSchemaVersion) + ")");

  std::string scenario_str = "calibration";
  if (doc.contains("scenario")) {
    if (!doc.at("scenario").is_string()) loc.fail("scenario", "expected a string");
    scenario_str = doc.at("scenario").get<std::string>();
  }
  ExperimentConfig cfg;
  rd.check("scenario", [&] { cfg.scenario = ScenarioConfig::defaults(parse_scenario(scenario_str)); });
  auto& sc = cfg.scenario;

  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) loc.fail("seed", "expected a non-negative integer");
    sc.source.seed = s.get<std::uint64_t>();
  }
  if (seed_override) sc.source.seed = *seed_override;

  if (doc.contains("threads")) {
    const auto& t = doc.at("threads");
    if (!t.is_number_unsigned() || t.get<std::uint64_t>() == 0 || t.get<std::uint64_t>() > 1024)
      loc.fail("threads", "expected an integer in [1, 1024]");
    sc.threads = t.get<unsigned>();
  }

  if (doc.contains("channel")) {
    const auto& c = doc.at("channel");
    rd.only_keys(c, "channel", {"h", "v", "delta_phi_c_deg", "env_overlap"});
    sc.channel.h = rd.complex(c, "channel", "h", sc.channel.h);
    sc.channel.v = rd.complex(c, "channel", "v", sc.channel.v);
    sc.channel.delta_phi_c =
        units::deg_to_rad(rd.number(c, "channel", "delta_phi_c_deg", units::rad_to_deg(sc.channel.delta_phi_c)));
    sc.channel.env_overlap = rd.complex(c, "channel", "env_overlap", sc.channel.env_overlap);
  }
  if (std::abs(sc.channel.env_overlap) > 1.0 + 1e-12) loc.fail("channel.env_overlap", "magnitude must be <= 1");
  if (std::abs(sc.channel.h) > 1.0 + 1e-12) loc.fail("channel.h", "magnitude must be <= 1");
  if (std::abs(sc.channel.v) > 1.0 + 1e-12) loc.fail("channel.v", "magnitude must be <= 1");
  rd.check("channel", [&] { sc.channel.validate(); });

  if (doc.contains("source")) {
    const auto& s = doc.at("source");
    rd.only_keys(s, "source", {"pair_rate", "integration_time_s", "channel_survival", "accidental_rate"});
    sc.source.pair_rate = rd.number(s, "source", "pair_rate", sc.source.pair_rate);
    sc.source.integration_time = rd.number(s, "source", "integration_time_s", sc.source.integration_time);
    sc.source.channel_survival = rd.number(s, "source", "channel_survival", sc.source.channel_survival);
    sc.source.accidental_rate = rd.number(s, "source", "accidental_rate", sc.source.accidental_rate);
  }
  if (!(sc.source.pair_rate > 0.0)) loc.fail("source.pair_rate", "must be > 0");
  if (!(sc.source.integration_time > 0.0)) loc.fail("source.integration_time_s", "must be > 0");
  if (!(sc.source.channel_survival > 0.0 && sc.source.channel_survival <= 1.0))
    loc.fail("source.channel_survival", "must lie in (0, 1]");
  if (!(sc.source.accidental_rate >= 0.0)) loc.fail("source.accidental_rate", "must be >= 0");
  rd.check("source", [&] { sc.source.validate(); });

  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    rd.only_keys(s, "sweep", {"beta_list_deg", "alpha_step_deg"});
    if (s.contains("beta_list_deg")) {
      const auto& list = s.at("beta_list_deg");
      if (!list.is_array() || list.empty()) loc.fail("sweep.beta_list_deg", "expected a non-empty array");
      sc.sweep.beta_list_deg.clear();
      for (const auto& b : list) {
        if (!b.is_number()) loc.fail("sweep.beta_list_deg", "expected numbers");
        sc.sweep.beta_list_deg.push_back(b.get<double>());
      }
    }
    sc.sweep.alpha_step_deg = rd.number(s, "sweep", "alpha_step_deg", sc.sweep.alpha_step_deg);
  }
  if (!(sc.sweep.alpha_step_deg > 0.0 && sc.sweep.alpha_step_deg <= 90.0))
    loc.fail("sweep.alpha_step_deg", "must lie in (0, 90] to give at least 4 angles per fringe");

  if (doc.contains("chsh_angles_deg")) {
    const auto& a = doc.at("chsh_angles_deg");
    rd.only_keys(a, "chsh_angles_deg", {"a1", "a2", "b1", "b2"});
    sc.chsh.a1 = rd.number(a, "chsh_angles_deg", "a1", sc.chsh.a1);
    sc.chsh.a2 = rd.number(a, "chsh_angles_deg", "a2", sc.chsh.a2);
    sc.chsh.b1 = rd.number(a, "chsh_angles_deg", "b1", sc.chsh.b1);
    sc.chsh.b2 = rd.number(a, "chsh_angles_deg", "b2", sc.chsh.b2);
  }

  if (doc.contains("analysis")) {
    const auto& a = doc.at("analysis");
    rd.only_keys(a, "analysis", {"n_sigma", "violation_k"});
    cfg.analysis.n_sigma = rd.number(a, "analysis", "n_sigma", cfg.analysis.n_sigma);
    cfg.analysis.violation_k = rd.number(a, "analysis", "violation_k", cfg.analysis.violation_k);
  }
  if (!(cfg.analysis.n_sigma >= 0.0)) loc.fail("analysis.n_sigma", "must be >= 0");
  if (!(cfg.analysis.violation_k >= 0.0)) loc.fail("analysis.violation_k", "must be >= 0");

  if (doc.contains("hole_array")) {
    const auto& h = doc.at("hole_array");
    rd.only_keys(h, "hole_array", {"period_nm", "max_order"});
    cfg.period_nm = rd.number(h, "hole_array", "period_nm", cfg.period_nm);
    const double order = rd.number(h, "hole_array", "max_order", cfg.max_order);
    if (order != std::floor(order) || order < 1 || order > 64)
      loc.fail("hole_array.max_order", "expected an integer in [1, 64]");
    cfg.max_order = static_cast<int>(order);
  }
  if (!(cfg.period_nm > 0.0)) loc.fail("hole_array.period_nm", "must be > 0");

  if (doc.contains("timescales")) {
    const auto& t = doc.at("timescales");
    rd.only_keys(t, "timescales", {"group_velocity_c", "hop_distance_um", "absorption_length_um"});
    cfg.timescales.group_velocity_c =
        rd.number(t, "timescales", "group_velocity_c", cfg.timescales.group_velocity_c);
    if (t.contains("hop_distance_um"))
      cfg.timescales.hop_distance_um = rd.number(t, "timescales", "hop_distance_um", 0.0);
    cfg.timescales.absorption_length_um =
        rd.number(t, "timescales", "absorption_length_um", cfg.timescales.absorption_length_um);
  }
  if (!(cfg.timescales.group_velocity_c > 0.0 && cfg.timescales.group_velocity_c <= 1.0))
    loc.fail("timescales.group_velocity_c", "must lie in (0, 1]");
  if (!(cfg.hop_distance_um() > 0.0)) loc.fail("timescales.hop_distance_um", "must be > 0");
  if (!(cfg.timescales.absorption_length_um > 0.0))
    loc.fail("timescales.absorption_length_um", "must be > 0");

  json metal_json = "gold", diel_json = {{"constant", complex_json({15.0, 0.0})}},
       ref_json = {{"constant", complex_json({1.0, 0.0})}};
  if (doc.contains("materials")) {
    const auto& m = doc.at("materials");
    rd.only_keys(m, "materials", {"metal", "dielectric_eps", "reference_eps"});
    if (m.contains("metal")) cfg.metal = parse_material(m.at("metal"), "materials.metal", rd, base_dir, metal_json);
    if (m.contains("dielectric_eps"))
      cfg.dielectric = parse_material(m.at("dielectric_eps"), "materials.dielectric_eps", rd, base_dir, diel_json);
    if (m.contains("reference_eps"))
      cfg.reference_dielectric =
          parse_material(m.at("reference_eps"), "materials.reference_eps", rd, base_dir, ref_json);
  }

  auto& dp = cfg.dispersion;
  if (doc.contains("dispersion")) {
    const auto& d = doc.at("dispersion");
    rd.only_keys(d, "dispersion", {"wavelength_nm", "delta_nm", "energy_min_ev", "energy_max_ev",
                                   "energy_points", "search_range_nm"});
    dp.wavelength_nm = rd.number(d, "dispersion", "wavelength_nm", dp.wavelength_nm);
    dp.delta_nm = rd.number(d, "dispersion", "delta_nm", dp.delta_nm);
    dp.energy_min_ev = rd.number(d, "dispersion", "energy_min_ev", dp.energy_min_ev);
    dp.energy_max_ev = rd.number(d, "dispersion", "energy_max_ev", dp.energy_max_ev);
    const double pts = rd.number(d, "dispersion", "energy_points", dp.energy_points);
    if (pts != std::floor(pts) || pts < 1 || pts > 1e6)
      loc.fail("dispersion.energy_points", "expected an integer in [1, 1e6]");
    dp.energy_points = static_cast<int>(pts);
    if (d.contains("search_range_nm")) {
      const auto& r = d.at("search_range_nm");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        loc.fail("dispersion.search_range_nm", "expected [min, max]");
      dp.search_min_nm = r[0].get<double>();
      dp.search_max_nm = r[1].get<double>();
    }
  }
  if (!(dp.wavelength_nm > 0.0)) loc.fail("dispersion.wavelength_nm", "must be > 0");
  if (!(dp.delta_nm > 0.0 && dp.delta_nm < dp.wavelength_nm)) loc.fail("dispersion.delta_nm", "must lie in (0, wavelength)");
  if (!(dp.energy_min_ev > 0.0 && dp.energy_max_ev >= dp.energy_min_ev))
    loc.fail("dispersion.energy_min_ev", "need 0 < energy_min_ev <= energy_max_ev");
  if (!(dp.search_min_nm > 0.0 && dp.search_max_nm > dp.search_min_nm))
    loc.fail("dispersion.search_range_nm", "need 0 < min < max");

  // Effective configuration, every default expanded; keys sort on dump.
  json eff;
  eff["schema_version"] = kConfigSchemaVersion;
  eff["scenario"] = std::string(scenario_name(sc.kind));
  eff["seed"] = sc.source.seed;
  eff["channel"] = {{"h", complex_json(sc.channel.h)},
                    {"v", complex_json(sc.channel.v)},
                    {"delta_phi_c_deg", units::rad_to_deg(sc.channel.delta_phi_c)},
                    {"env_overlap", complex_json(sc.channel.env_overlap)}};
  eff["source"] = {{"pair_rate", sc.source.pair_rate},
                   {"integration_time_s", sc.source.integration_time},
                   {"channel_survival", sc.source.channel_survival},
                   {"accidental_rate", sc.source.accidental_rate}};
  eff["sweep"] = {{"beta_list_deg", sc.sweep.beta_list_deg}, {"alpha_step_deg", sc.sweep.alpha_step_deg}};
  eff["chsh_angles_deg"] = {{"a1", sc.chsh.a1}, {"a2", sc.chsh.a2}, {"b1", sc.chsh.b1}, {"b2", sc.chsh.b2}};
  eff["analysis"] = {{"n_sigma", cfg.analysis.n_sigma}, {"violation_k", cfg.analysis.violation_k}};
  eff["timescales"] = {{"group_velocity_c", cfg.timescales.group_velocity_c},
                       {"hop_distance_um", cfg.hop_distance_um()},
                       {"absorption_length_um", cfg.timescales.absorption_length_um}};
  eff["materials"] = {{"metal", metal_json}, {"dielectric_eps", diel_json}, {"reference_eps", ref_json}};
  eff["hole_array"] = {{"period_nm", cfg.period_nm}, {"max_order", cfg.max_order}};
  eff["dispersion"] = {{"wavelength_nm", dp.wavelength_nm},
                       {"delta_nm", dp.delta_nm},
                       {"energy_min_ev", dp.energy_min_ev},
                       {"energy_max_ev", dp.energy_max_ev},
                       {"energy_points", dp.energy_points},
                       {"search_range_nm", {dp.search_min_nm, dp.search_max_nm}}};
  // thread count is excluded: it never changes results
  cfg.canonical_json = eff.dump();
  cfg.config_hash = fnv1a_hex(cfg.canonical_json);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), path.parent_path(), seed_override);
}

ExperimentConfig default_config(std::string_view scenario, std::optional<std::uint64_t> seed_override) {
  const json doc = {{"scenario", std::string(scenario)}};
  return parse_config(doc.dump(), "defaults", {}, seed_override);
}

}  // namespace plasmonq
