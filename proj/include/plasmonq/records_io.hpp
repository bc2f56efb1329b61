#pragma once

#include "plasmonq/counting.hpp"
#include "plasmonq/dispersion.hpp"
#include "plasmonq/estimation.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace plasmonq {

inline constexpr std::string_view kCountsHeader = "alpha_deg,beta_deg,time_s,counts";
inline constexpr std::string_view kFringeHeader = "beta_deg,alpha_deg,model_counts";
inline constexpr std::string_view kBandHeader = "energy_ev,k_folded_rad_per_um,branch,light_line_rad_per_um";
inline constexpr std::string_view kEotHeader = "order_i,order_j,wavelength_nm";

std::string format_counts_csv(const std::vector<CountRecord>& records);
/// Throws DataError with the offending line on any schema mismatch.
std::vector<CountRecord> parse_counts_csv(std::string_view text);

/// Fit curves sampled every `step_deg` over [0, 360).
std::string format_fringe_csv(const std::vector<FringeFit>& fits, double step_deg = 1.0);
std::string format_band_csv(const std::vector<BandPoint>& band);
std::string format_eot_csv(const std::vector<EotResonance>& resonances);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace plasmonq
