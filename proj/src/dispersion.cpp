#include "plasmonq/dispersion.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/text_format.hpp"
#include "plasmonq/units.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace plasmonq {
namespace {

constexpr double kBisectionTolNm = 1e-10;

}  // namespace

void HoleArraySpec::validate() const {
  if (!(period_nm > 0.0)) throw ConfigError("hole array period must be > 0");
  if (max_order < 1) throw ConfigError("hole array max_order must be >= 1");
}

double HoleArraySpec::reciprocal_vector() const {
  return 2.0 * std::numbers::pi * 1000.0 / period_nm;
}

Complex spp_wavevector(Complex eps_m, Complex eps_d, double wavelength_nm) {
  const Complex sum = eps_m + eps_d;
  if (std::abs(sum) <= 1e-14 * (std::abs(eps_m) + std::abs(eps_d)))
    throw NumericalError("surface plasmon resonance: eps_m + eps_d = 0 at " +
                         format_number(wavelength_nm) + " nm");
  Complex q = std::sqrt(eps_m * eps_d / sum);
  if (q.imag() < 0.0) q = -q;
  return units::vacuum_wavenumber(wavelength_nm) * q;
}

Complex spp_wavevector(const MaterialModel& metal, const MaterialModel& dielectric,
                       double wavelength_nm) {
  return spp_wavevector(metal.permittivity(wavelength_nm), dielectric.permittivity(wavelength_nm),
                        wavelength_nm);
}

double group_velocity(const MaterialModel& metal, const MaterialModel& dielectric,
                      double wavelength_nm, double delta_nm) {
  if (!(delta_nm > 0.0) || !(delta_nm < wavelength_nm))
    throw ConfigError("group velocity stencil needs 0 < delta < wavelength");
  const double short_wl = wavelength_nm - delta_nm;
  const double long_wl = wavelength_nm + delta_nm;
  const double dk = spp_wavevector(metal, dielectric, short_wl).real() -
                    spp_wavevector(metal, dielectric, long_wl).real();
  if (!(dk > 0.0)) {
    throw NumericalError("group velocity stencil failure at " + format_number(wavelength_nm) +
                         " nm: Re k not monotonic, reduce delta");
  }
  const double dk0 = units::vacuum_wavenumber(short_wl) - units::vacuum_wavenumber(long_wl);
  return dk0 / dk;
}

double propagation_length(Complex k) {
  if (!(k.imag() > 0.0)) throw NumericalError("lossless mode: Im k <= 0 has no propagation length");
  return 1.0 / (2.0 * k.imag());
}

SppPoint spp_point(const MaterialModel& metal, const MaterialModel& dielectric,
                   double wavelength_nm, double delta_nm) {
  SppPoint p;
  p.energy = units::wavelength_to_ev(wavelength_nm);
  p.k = spp_wavevector(metal, dielectric, wavelength_nm);
  p.v_g = group_velocity(metal, dielectric, wavelength_nm, delta_nm);
  p.l_prop = propagation_length(p.k);
  return p;
}

FoldedWavevector fold_wavevector(double k, double reciprocal_vector) {
  const double n = std::round(k / reciprocal_vector);
  return {std::abs(k - n * reciprocal_vector), static_cast<int>(n)};
}

std::vector<BandPoint> band_structure(const HoleArraySpec& spec,
                                      const std::vector<double>& energies_ev) {
  spec.validate();
  const double g = spec.reciprocal_vector();
  std::vector<BandPoint> out;
  out.reserve(energies_ev.size());
  for (double e : energies_ev) {
    if (!(e > 0.0)) throw ConfigError("band structure energies must be > 0");
    const double wl = units::ev_to_wavelength(e);
    BandPoint p;
    p.energy = e;
    p.k_spp = spp_wavevector(spec.metal, spec.dielectric, wl).real();
    p.folded = fold_wavevector(p.k_spp, g);
    p.light_line = std::sqrt(spec.dielectric.permittivity(wl).real()) * units::vacuum_wavenumber(wl);
    out.push_back(p);
  }
  return out;
}

std::vector<EotResonance> eot_resonances(const HoleArraySpec& spec,
                                         std::pair<double, double> search_range_nm) {
  spec.validate();
  auto [lo, hi] = search_range_nm;
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("EOT search range must satisfy 0 < lo < hi");
  for (const auto* m : {&spec.metal, &spec.dielectric}) {
    const auto [rlo, rhi] = m->wavelength_range();
    if (lo < rlo || hi > rhi)
      throw RangeError("EOT search range outside material data of " + m->name(), lo < rlo ? lo : hi);
  }

  const double g = spec.reciprocal_vector();
  auto re_k = [&](double wl) -> std::optional<double> {
    try {
      return spp_wavevector(spec.metal, spec.dielectric, wl).real();
    } catch (const NumericalError&) {
      return std::nullopt;  // exactly on the resonance pole
    }
  };

  // grid fine enough to separate neighbouring orders near the steep part
  const int samples = std::max(2000, static_cast<int>((hi - lo) / 0.25));
  std::vector<double> grid(static_cast<std::size_t>(samples) + 1);
  std::vector<std::optional<double>> k_grid(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    grid[s] = lo + (hi - lo) * static_cast<double>(s) / samples;
    k_grid[s] = re_k(grid[s]);
  }

  std::vector<EotResonance> out;
  for (int i = 1; i <= spec.max_order; ++i) {
    for (int j = 0; j <= i; ++j) {
      const int n2 = i * i + j * j;
      if (n2 > spec.max_order * spec.max_order) continue;
      const double target = g * std::sqrt(static_cast<double>(n2));
      for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
        if (!k_grid[s] || !k_grid[s + 1]) continue;
        const double f0 = *k_grid[s] - target;
        const double f1 = *k_grid[s + 1] - target;
        if (f0 == 0.0) {
          out.push_back({i, j, grid[s]});
          continue;
        }
        if (f0 * f1 > 0.0 || f1 == 0.0) continue;
        double a = grid[s], b = grid[s + 1], fa = f0;
        bool ok = true;
        while (b - a > kBisectionTolNm) {
          const double mid = 0.5 * (a + b);
          const auto km = re_k(mid);
          if (!km) {
            ok = false;
            break;
          }
          const double fm = *km - target;
          if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        if (!ok) continue;
        const double root = 0.5 * (a + b);
        // a sign change across the pole is not a root
        const auto k_root = re_k(root);
        if (k_root && std::abs(*k_root - target) <= 1e-6 * target) out.push_back({i, j, root});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const EotResonance& x, const EotResonance& y) {
    return x.wavelength_nm > y.wavelength_nm;
  });
  return out;
}

Timescales timescales(double v_g, double hop_distance_um, double absorption_length_um) {
  if (!(v_g > 0.0) || !(hop_distance_um > 0.0) || !(absorption_length_um > 0.0))
    throw ConfigError("timescales need positive v_g, hop distance and absorption length");
  const double speed = v_g * units::kSpeedOfLightUmPerFs;
  Timescales t;
  t.t_p = hop_distance_um / speed;
  t.t1 = absorption_length_um / speed;
  t.t2 = 2.0 * t.t1;
  return t;
}

}  // namespace plasmonq
