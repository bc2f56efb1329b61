#pragma once

#include "plasmonq/material.hpp"

#include <utility>
#include <vector>

namespace plasmonq {

/// One sample of a single-interface SPP branch.
struct SppPoint {
  double energy = 0.0;  // eV
  Complex k;            // rad/um
  double v_g = 0.0;     // units of c
  double l_prop = 0.0;  // um, intensity 1/e length
};

/// Square hole array. Top and bottom interfaces are taken as identical,
/// uncoupled single interfaces between `metal` and `dielectric`.
struct HoleArraySpec {
  double period_nm = 850.0;
  MaterialModel dielectric = MaterialModel::constant({15.0, 0.0});
  MaterialModel metal = MaterialModel::gold();
  int max_order = 8;

  void validate() const;
  /// Reciprocal lattice constant 2 pi / P in rad/um.
  double reciprocal_vector() const;
};

struct Timescales {
  double t_p = 0.0;  // fs
  double t1 = 0.0;   // fs
  double t2 = 0.0;   // fs, always 2 * t1
};

/// k = (omega/c) sqrt(eps_m eps_d / (eps_m + eps_d)) on the decaying
/// forward branch (Im k >= 0). Throws NumericalError at eps_m + eps_d = 0.
Complex spp_wavevector(Complex eps_m, Complex eps_d, double wavelength_nm);
Complex spp_wavevector(const MaterialModel& metal, const MaterialModel& dielectric,
                       double wavelength_nm);

/// d omega / d Re k by a central difference of half-width `delta_nm`.
/// Throws NumericalError if Re k does not increase towards shorter wavelength
/// across the stencil.
double group_velocity(const MaterialModel& metal, const MaterialModel& dielectric,
                      double wavelength_nm, double delta_nm = 1.0);

/// 1 / (2 Im k). Throws NumericalError for Im k <= 0.
double propagation_length(Complex k);

SppPoint spp_point(const MaterialModel& metal, const MaterialModel& dielectric,
                   double wavelength_nm, double delta_nm = 1.0);

struct FoldedWavevector {
  double k = 0.0;  // in [0, G/2]
  int branch = 0;  // index of the nearest reciprocal lattice vector
};

/// Reduced-zone image |k - nG| with n = round(k / G).
FoldedWavevector fold_wavevector(double k, double reciprocal_vector);

struct BandPoint {
  double energy = 0.0;            // eV
  double k_spp = 0.0;             // Re k, unfolded, rad/um
  FoldedWavevector folded;
  double light_line = 0.0;        // sqrt(Re eps_d) omega / c, rad/um
};

/// Empty-lattice band structure along Gamma-X, one point per requested energy.
std::vector<BandPoint> band_structure(const HoleArraySpec& spec,
                                      const std::vector<double>& energies_ev);

struct EotResonance {
  int i = 0;
  int j = 0;
  double wavelength_nm = 0.0;
};

/// Normal-incidence resonances Re k_spp(lambda) = (2 pi / P) sqrt(i^2 + j^2)
/// for i >= j >= 0, 1 <= i^2 + j^2 <= max_order^2, found by bracketed
/// bisection. Orders without a sign change in range are skipped.
std::vector<EotResonance> eot_resonances(const HoleArraySpec& spec,
                                         std::pair<double, double> search_range_nm);

/// t_p = hop / v_g, T1 = L_abs / v_g, T2 = 2 T1.
Timescales timescales(double v_g, double hop_distance_um, double absorption_length_um);

}  // namespace plasmonq
