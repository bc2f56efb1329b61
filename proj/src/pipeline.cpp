#include "plasmonq/pipeline.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/records_io.hpp"
#include "plasmonq/text_format.hpp"
#include "plasmonq/units.hpp"

#include <json.hpp>

#include <cmath>

#ifndef PLASMONQ_VERSION
#define PLASMONQ_VERSION "0.0.0"
#endif

namespace plasmonq {
namespace {

using nlohmann::json;

json stat(double x) { return std::isfinite(x) ? json(round_significant(x)) : json(nullptr); }

json timescales_json(const Timescales& t) {
  return {{"t_p_fs", stat(t.t_p)}, {"t1_fs", stat(t.t1)}, {"t2_fs", stat(t.t2)}};
}

std::vector<CountRecord> records_at_beta(const std::vector<CountRecord>& records, double beta) {
  std::vector<CountRecord> out;
  for (const auto& r : records)
    if (std::abs(r.beta_deg - beta) < 1e-9) out.push_back(r);
  return out;
}

}  // namespace

std::string_view tool_version() { return PLASMONQ_VERSION; }

std::string summary_to_json(const SummaryReport& r) {
  json j;
  j["tool"] = "plasmonq";
  j["version"] = std::string(tool_version());
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["counts_hash"] = r.counts_hash;
  j["V"] = stat(r.primary.v);
  j["sigma_V"] = stat(r.primary.sigma_v);
  j["visibility_beta_deg"] = r.primary.beta_fixed;
  json fringes = json::array();
  for (const auto& f : r.fringes) {
    fringes.push_back({{"beta_deg", f.fit.beta_deg},
                       {"V", stat(f.visibility.v)},
                       {"sigma_V", stat(f.visibility.sigma_v)},
                       {"c0", stat(f.fit.c0)},
                       {"c1", stat(f.fit.c1)},
                       {"c2", stat(f.fit.c2)},
                       {"chi2", stat(f.fit.chi2)},
                       {"n_points", f.fit.n_points}});
  }
  j["fringes"] = fringes;
  j["S"] = stat(r.chsh.s);
  j["sigma_S"] = stat(r.chsh.sigma_s);
  j["E"] = json::array();
  for (double e : r.chsh.e_values) j["E"].push_back(stat(e));
  j["chsh_angles_deg"] = {{"a1", r.chsh.angles.a1}, {"a2", r.chsh.angles.a2},
                          {"b1", r.chsh.angles.b1}, {"b2", r.chsh.angles.b2}};
  j["bell_violation"] = r.chsh.bell_violation;
  j["violation_k"] = r.violation_k;
  j["n_sigma"] = r.n_sigma;
  if (r.dephasing) {
    j["t2star_bound_fs"] = stat(r.dephasing->bound_fs);  // null when unbounded
    j["t2star_bound_kind"] = r.dephasing->kind == BoundKind::kFinite ? "finite" : "unbounded";
    j["t2star_order_of_magnitude_fs"] = stat(r.dephasing->order_of_magnitude_fs);
  } else {
    j["t2star_bound_fs"] = nullptr;
    j["t2star_bound_kind"] = "none";
    j["t2star_order_of_magnitude_fs"] = nullptr;
  }
  json ts = timescales_json(r.timescales);
  ts["group_velocity_c"] = r.timescale_inputs.group_velocity_c;
  ts["hop_distance_um"] = stat(r.timescale_inputs.hop_distance_um.value_or(0.0));
  ts["absorption_length_um"] = r.timescale_inputs.absorption_length_um;
  j["timescales"] = ts;
  return j.dump(2) + "\n";
}

SummaryReport analyze_records(const std::vector<CountRecord>& records, const ExperimentConfig& config) {
  if (records.empty()) throw InsufficientDataError("no count records to analyze");
  const auto& sc = config.scenario;

  SummaryReport rep;
  rep.scenario = std::string(scenario_name(sc.kind));
  rep.seed = sc.source.seed;
  rep.config_hash = config.config_hash;
  rep.counts_hash = fnv1a_hex(format_counts_csv(records));
  rep.violation_k = config.analysis.violation_k;
  rep.n_sigma = config.analysis.n_sigma;

  const FringeResult* at45 = nullptr;
  const FringeResult* at135 = nullptr;
  rep.fringes.reserve(sc.sweep.beta_list_deg.size());
  for (double beta : sc.sweep.beta_list_deg) {
    const auto group = records_at_beta(records, beta);
    if (group.empty()) continue;
    const FringeFit fit = fit_fringe(group);
    rep.fringes.push_back({fit, visibility(fit)});
  }
  for (const auto& f : rep.fringes) {
    if (std::abs(f.fit.beta_deg - 45.0) < 1e-9) at45 = &f;
    if (std::abs(f.fit.beta_deg - 135.0) < 1e-9) at135 = &f;
  }
  if (!at45 && !at135)
    throw InsufficientDataError("visibility needs a fringe sweep at beta = 45 or 135 deg");
  rep.primary = (at45 ? at45 : at135)->visibility;

  rep.chsh = estimate_chsh(records, sc.chsh, config.analysis.violation_k);

  rep.timescale_inputs = config.timescales;
  rep.timescale_inputs.hop_distance_um = config.hop_distance_um();
  rep.timescales = timescales(config.timescales.group_velocity_c, config.hop_distance_um(),
                              config.timescales.absorption_length_um);
  try {
    rep.dephasing = dephasing_bound(rep.primary, rep.timescales.t_p, config.analysis.n_sigma);
  } catch (const DataError&) {
    rep.dephasing.reset();  // visibility too low for a bound
  }
  return rep;
}

SimulationOutput cmd_simulate(const ExperimentConfig& config) {
  SimulationOutput out;
  out.records = run_scenario(config.scenario).records;
  out.summary = analyze_records(out.records, config);
  out.counts_csv = format_counts_csv(out.records);
  std::vector<FringeFit> fits;
  for (const auto& f : out.summary.fringes) fits.push_back(f.fit);
  out.fringes_csv = format_fringe_csv(fits);
  out.summary_json = summary_to_json(out.summary);
  return out;
}

SummaryReport cmd_analyze(const std::vector<CountRecord>& records, const ExperimentConfig& config) {
  return analyze_records(records, config);
}

DispersionOutput cmd_dispersion(const ExperimentConfig& config) {
  const auto& dp = config.dispersion;
  const double wl = dp.wavelength_nm;
  DispersionOutput out;

  auto interface = [&](const MaterialModel& diel) {
    InterfaceReport r;
    r.eps_d = diel.permittivity(wl).real();
    r.k = spp_wavevector(config.metal, diel, wl);
    r.v_g = group_velocity(config.metal, diel, wl, dp.delta_nm);
    if (r.k.imag() > 0.0) r.l_prop = propagation_length(r.k);
    return r;
  };
  out.reference = interface(config.reference_dielectric);
  out.dielectric = interface(config.dielectric);
  out.group_velocity_ratio = out.reference.v_g / out.dielectric.v_g;
  out.wavevector_ratio = out.dielectric.k.real() / out.reference.k.real();
  if (out.dielectric.l_prop && out.dielectric.v_g > 0.0)
    out.computed = timescales(out.dielectric.v_g, config.hop_distance_um(), *out.dielectric.l_prop);
  out.nominal = timescales(config.timescales.group_velocity_c, config.hop_distance_um(),
                           config.timescales.absorption_length_um);

  std::vector<double> energies(static_cast<std::size_t>(dp.energy_points));
  for (int i = 0; i < dp.energy_points; ++i) {
    energies[static_cast<std::size_t>(i)] =
        dp.energy_points == 1 ? dp.energy_min_ev
                              : dp.energy_min_ev + (dp.energy_max_ev - dp.energy_min_ev) * i / (dp.energy_points - 1);
  }
  const HoleArraySpec spec = config.hole_array();
  out.band = band_structure(spec, energies);
  out.resonances = eot_resonances(spec, {dp.search_min_nm, dp.search_max_nm});
  out.band_csv = format_band_csv(out.band);
  out.eot_csv = format_eot_csv(out.resonances);

  auto iface_json = [](const InterfaceReport& r) {
    return json{{"eps_d", stat(r.eps_d)},
                {"k_re_rad_per_um", stat(r.k.real())},
                {"k_im_rad_per_um", stat(r.k.imag())},
                {"group_velocity_c", stat(r.v_g)},
                {"propagation_length_um", r.l_prop ? stat(*r.l_prop) : json(nullptr)}};
  };
  json j;
  j["tool"] = "plasmonq";
  j["version"] = std::string(tool_version());
  j["config_hash"] = config.config_hash;
  j["wavelength_nm"] = wl;
  j["energy_ev"] = stat(units::wavelength_to_ev(wl));
  j["metal"] = config.metal.name();
  j["reference_interface"] = iface_json(out.reference);
  j["dielectric_interface"] = iface_json(out.dielectric);
  j["group_velocity_ratio"] = stat(out.group_velocity_ratio);
  j["wavevector_ratio"] = stat(out.wavevector_ratio);
  j["hop_distance_um"] = stat(config.hop_distance_um());
  j["timescales_computed"] = out.computed ? timescales_json(*out.computed) : json(nullptr);
  j["timescales_nominal"] = timescales_json(out.nominal);
  json res = json::array();
  for (const auto& r : out.resonances)
    res.push_back({{"order", {r.i, r.j}}, {"wavelength_nm", stat(r.wavelength_nm)}});
  j["eot_resonances"] = res;
  out.report_json = j.dump(2) + "\n";
  return out;
}

void write_outputs(const std::filesystem::path& dir, const SimulationOutput& out) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "counts.csv", out.counts_csv);
  write_text_file(dir / "fringes.csv", out.fringes_csv);
  write_text_file(dir / "summary.json", out.summary_json);
}

void write_outputs(const std::filesystem::path& dir, const DispersionOutput& out) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "band.csv", out.band_csv);
  write_text_file(dir / "eot.csv", out.eot_csv);
  write_text_file(dir / "dispersion.json", out.report_json);
}

}  // namespace plasmonq
