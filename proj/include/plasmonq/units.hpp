#pragma once

#include <numbers>

namespace plasmonq::units {

inline constexpr double kHcEvNm = 1239.842;  // photon energy (eV) * wavelength (nm)
inline constexpr double kHbarEvFs = 0.6582119569;  // eV fs
inline constexpr double kSpeedOfLightUmPerFs = 0.299792458;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline constexpr double wavelength_to_ev(double nm) { return kHcEvNm / nm; }
inline constexpr double ev_to_wavelength(double ev) { return kHcEvNm / ev; }

/// Vacuum wavenumber 2 pi / lambda in rad/um.
inline constexpr double vacuum_wavenumber(double nm) { return 2.0 * std::numbers::pi * 1000.0 / nm; }

}  // namespace plasmonq::units
