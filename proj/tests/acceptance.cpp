// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "plasmonq/config.hpp"
#include "plasmonq/dispersion.hpp"
#include "plasmonq/errors.hpp"
#include "plasmonq/estimation.hpp"
#include "plasmonq/pipeline.hpp"
#include "plasmonq/quantum_state.hpp"
#include "plasmonq/records_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace plasmonq;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ChannelParams random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  ChannelParams ch;
  ch.h = std::polar(0.05 + 0.95 * unit(rng), phase(rng));
  ch.v = std::polar(0.05 + 0.95 * unit(rng), phase(rng));
  ch.delta_phi_c = phase(rng);
  ch.env_overlap = std::polar(unit(rng), phase(rng));
  return ch;
}

Outcome closed_form_limits() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_coherent = 0.0, worst_mixed = 0.0;
  const auto coherent = ChannelParams::identity();
  const auto mixed = ChannelParams::balanced(0.0);
  for (int a = 0; a < 360; ++a) {
    for (int b = 0; b < 360; ++b) {
      const double p = coincidence_probability(coherent, {a * kDeg, b * kDeg});
      worst_coherent = std::max(worst_coherent, std::abs(p - 0.5 * std::pow(std::cos((a - b) * kDeg), 2)));
    }
    worst_mixed = std::max(worst_mixed, std::abs(coincidence_probability(mixed, {a * kDeg, 45 * kDeg}) - 0.25));
  }
  const double t = seconds_since(t0);
  return {worst_coherent < 1e-12 && worst_mixed < 1e-12 && t < 1.0,
          fmt("max err coherent %.2e, mixed %.2e, %.3f s", worst_coherent, worst_mixed, t)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ch = random_channel(rng);
    const PolarizerPair s{angle(rng), angle(rng)};
    worst = std::max(worst, std::abs(coincidence_probability(ch, s) - coincidence_probability_oracle(ch, s)));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-12 && t < 5.0, fmt("10^4 cases, max err %.2e, %.3f s", worst, t)};
}

struct Ensemble {
  double mean_v = 0.0, mean_s = 0.0, mean_sigma_v = 0.0, mean_sigma_s = 0.0, seconds = 0.0;
};

Ensemble run_ensemble(const char* scenario, int seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  Ensemble e;
  for (int s = 0; s < seeds; ++s) {
    const auto out = cmd_simulate(default_config(scenario, static_cast<std::uint64_t>(s)));
    e.mean_v += out.summary.primary.v;
    e.mean_s += out.summary.chsh.s;
    e.mean_sigma_v += out.summary.primary.sigma_v;
    e.mean_sigma_s += out.summary.chsh.sigma_s;
  }
  e.mean_v /= seeds;
  e.mean_s /= seeds;
  e.mean_sigma_v /= seeds;
  e.mean_sigma_s /= seeds;
  e.seconds = seconds_since(t0);
  return e;
}

Outcome calibration_reproduction() {
  const auto e = run_ensemble("calibration", 100);
  const bool ok = std::abs(e.mean_v - 0.99) <= 0.005 && std::abs(e.mean_s - 2.80) <= 0.02 &&
                  e.mean_sigma_v <= 0.015 && e.seconds < 30.0;
  return {ok, fmt("100 seeds: V %.5f, S %.4f, sigma_V %.5f, sigma_S %.4f, %.2f s", e.mean_v, e.mean_s,
                  e.mean_sigma_v, e.mean_sigma_s, e.seconds)};
}

Outcome dispersive_reproduction() {
  const auto e = run_ensemble("holearray-silicon", 100);
  const double target = 2.0 * std::numbers::sqrt2 * e.mean_v;
  const bool ok = std::abs(e.mean_v - 0.98) <= 0.01 && std::abs(e.mean_s - target) <= 2.0 * e.mean_sigma_s &&
                  e.seconds < 30.0;
  return {ok, fmt("100 seeds: V %.5f, S %.4f vs 2sqrt2 V %.4f (2 sigma_S = %.4f), %.2f s", e.mean_v, e.mean_s,
                  target, 2.0 * e.mean_sigma_s, e.seconds)};
}

double noiseless_s(const ChannelParams& ch) {
  const ChshAngles angles;
  std::array<Correlation, 4> c;
  std::size_t i = 0;
  for (double a : {angles.a1, angles.a2}) {
    for (double b : {angles.b1, angles.b2}) {
      auto p = [&](double x, double y) { return coincidence_probability(ch, {x * kDeg, y * kDeg}); };
      c[i++] = {p(a, b) + p(a + 90, b + 90) - p(a + 90, b) - p(a, b + 90), 0.0};
    }
  }
  return chsh_s(c, 3.0, angles).s;
}

Outcome s_v_identity() {
  double worst = 0.0;
  std::ostringstream detail;
  for (double v : {0.0, 0.25, 0.5, 0.75, 0.98, 1.0}) {
    const double s = noiseless_s(ChannelParams::balanced(v));
    worst = std::max(worst, std::abs(s - 2.0 * std::numbers::sqrt2 * v));
    detail << fmt("V=%.2f S=%.6f; ", v, s);
  }
  const double ideal = noiseless_s(ChannelParams::identity());
  const bool ok = worst < 1e-9 && std::abs(ideal - 2.828427) <= 1e-6;
  detail << fmt("max |S - 2sqrt2 V| %.3e, ideal S %.7f", worst, ideal);
  return {ok, detail.str()};
}

Outcome dispersion_numbers() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = default_config();
  const auto gold = MaterialModel::gold();
  const double vg_air = group_velocity(gold, cfg.reference_dielectric, 812.0);
  const double vg_si = group_velocity(gold, cfg.dielectric, 812.0);
  const double ratio = vg_air / vg_si;
  const double k_ratio =
      spp_wavevector(gold, cfg.dielectric, 812.0).real() / spp_wavevector(gold, cfg.reference_dielectric, 812.0).real();
  const double t = seconds_since(t0);
  const bool air_ok = std::abs(vg_air / 0.59 - 1.0) <= 0.10;
  const bool si_ok = std::abs(vg_si / 0.05 - 1.0) <= 0.30;
  const bool ratio_ok = std::abs(ratio / 11.8 - 1.0) <= 0.15;
  const bool k_ok = std::abs(k_ratio / 6.0 - 1.0) <= 0.25;
  return {air_ok && si_ok && ratio_ok && k_ok && t < 5.0,
          fmt("v_g air %.4f (%s), v_g a-Si %.4f (%s), ratio %.2f (%s), Re k ratio %.3f (%s), %.3f s", vg_air,
              air_ok ? "ok" : "out", vg_si, si_ok ? "ok" : "out", ratio, ratio_ok ? "ok" : "out", k_ratio,
              k_ok ? "ok" : "out", t)};
}

Outcome timescale_numbers() {
  const auto t = timescales(0.05, 1.2, 0.15);
  double worst_t2 = 0.0;
  for (int nm = 1; nm <= 200; ++nm) worst_t2 = std::max(worst_t2, timescales(0.05, 1.2, nm / 1000.0).t2);
  const bool ok = std::abs(t.t_p / 80.0 - 1.0) <= 0.01 && std::abs(t.t2 / 20.0 - 1.0) <= 0.01 && worst_t2 <= 26.7;
  return {ok, fmt("t_p %.3f fs, T2 %.3f fs, max T2 over L_abs <= 200 nm %.3f fs", t.t_p, t.t2, worst_t2)};
}

Outcome dephasing_numbers() {
  const auto b = dephasing_bound({0.98, 0.02, 45.0}, 80.0, 1.0);
  const bool ok = b.kind == BoundKind::kFinite && std::abs(b.bound_fs / 1961.0 - 1.0) <= 0.01 &&
                  b.order_of_magnitude_fs >= 100.0 && b.order_of_magnitude_fs < 1000.0;
  return {ok, fmt("bound %.2f fs, order of magnitude %.0f fs", b.bound_fs, b.order_of_magnitude_fs)};
}

Outcome eot_sanity() {
  HoleArraySpec pec;
  pec.metal = MaterialModel::perfect_conductor();
  pec.dielectric = MaterialModel::constant({1.0, 0.0});
  double r10 = -1.0, r11 = -1.0;
  for (const auto& r : eot_resonances(pec, {500.0, 1000.0})) {
    if (r.i == 1 && r.j == 0) r10 = r.wavelength_nm;
    if (r.i == 1 && r.j == 1) r11 = r.wavelength_nm;
  }
  double nearest = 0.0;
  for (const auto& r : eot_resonances(HoleArraySpec{}, {600.0, 1000.0}))
    if (std::abs(r.wavelength_nm - 812.0) < std::abs(nearest - 812.0)) nearest = r.wavelength_nm;
  const bool ok = std::abs(r10 - 850.0) <= 0.01 && std::abs(r11 - 601.04) <= 0.01 && std::abs(nearest - 812.0) <= 40.0;
  return {ok, fmt("(1,0) %.4f nm, (1,1) %.4f nm, gold/a-Si nearest to 812: %.2f nm", r10, r11, nearest)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PLASMONQ_CLI) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism_and_normalization() {
  const auto dir = fs::temp_directory_path() / "plasmonq_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  bool identical = true;
  std::vector<std::string> reference;
  const char* files[] = {"counts.csv", "fringes.csv", "summary.json"};
  int runs = 0;
  for (unsigned threads : {1u, 1u, 2u, 8u}) {
    const auto cfg = dir / ("cfg" + std::to_string(runs) + ".json");
    write_text_file(cfg, "{\"scenario\": \"holearray-silicon\", \"seed\": 2024, \"threads\": " +
                             std::to_string(threads) + "}");
    const auto out = dir / ("run" + std::to_string(runs++));
    identical = identical && run_cli("simulate --config " + cfg.string() + " --out " + out.string()) == 0;
    for (std::size_t f = 0; f < 3; ++f) {
      const auto text = identical ? read_text_file(out / files[f]) : std::string();
      if (reference.size() < 3) reference.push_back(text);
      else identical = identical && text == reference[f] && !text.empty();
    }
  }
  fs::remove_all(dir);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ch = random_channel(rng);
    const double a = angle(rng), b = angle(rng), q = kPi / 2;
    const double total = coincidence_probability(ch, {a, b}) + coincidence_probability(ch, {a + q, b}) +
                         coincidence_probability(ch, {a, b + q}) + coincidence_probability(ch, {a + q, b + q});
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return {identical && worst < 1e-12,
          fmt("outputs %s across 2 runs and 1/2/8 threads, normalization max err %.2e",
              identical ? "byte-identical" : "DIFFER", worst)};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form limits", closed_form_limits},
      {"oracle equivalence", oracle_equivalence},
      {"calibration reproduction", calibration_reproduction},
      {"dispersive-sample reproduction", dispersive_reproduction},
      {"S-V identity", s_v_identity},
      {"dispersion numbers", dispersion_numbers},
      {"timescales", timescale_numbers},
      {"dephasing bound", dephasing_numbers},
      {"EOT sanity", eot_sanity},
      {"determinism and normalization", determinism_and_normalization},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
