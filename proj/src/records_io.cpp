#include "plasmonq/records_io.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/text_format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace plasmonq {

std::string format_counts_csv(const std::vector<CountRecord>& records) {
  std::string out(kCountsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_number(r.alpha_deg) + ',' + format_number(r.beta_deg) + ',' +
           format_number(r.integration_time) + ',' + std::to_string(r.counts) + '\n';
  }
  return out;
}

std::vector<CountRecord> parse_counts_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines.front()) != kCountsHeader)
    throw DataError("counts CSV line 1: expected header '" + std::string(kCountsHeader) + "'");
  std::vector<CountRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string where = "counts CSV line " + std::to_string(i + 1);
    const auto f = split_fields(line, ',');
    if (f.size() != 4) throw DataError(where + ": expected 4 fields, got " + std::to_string(f.size()));
    CountRecord r{parse_double(f[0], where), parse_double(f[1], where), parse_double(f[2], where),
                  parse_u64(f[3], where)};
    if (!std::isfinite(r.alpha_deg) || !std::isfinite(r.beta_deg))
      throw DataError(where + ": angles must be finite");
    if (!(r.integration_time > 0.0) || !std::isfinite(r.integration_time))
      throw DataError(where + ": time_s must be > 0");
    out.push_back(r);
  }
  if (out.empty()) throw InsufficientDataError("counts CSV has no records");
  return out;
}

std::string format_fringe_csv(const std::vector<FringeFit>& fits, double step_deg) {
  std::string out(kFringeHeader);
  out += '\n';
  const auto steps = static_cast<int>(std::lround(360.0 / step_deg));
  char buf[64];
  for (const auto& fit : fits) {
    for (int k = 0; k < steps; ++k) {
      const double alpha = k * step_deg;
      std::snprintf(buf, sizeof buf, "%.6g", fit.model(alpha));
      out += format_number(fit.beta_deg) + ',' + format_number(alpha) + ',' + buf + '\n';
    }
  }
  return out;
}

std::string format_band_csv(const std::vector<BandPoint>& band) {
  std::string out(kBandHeader);
  out += '\n';
  char buf[160];
  for (const auto& p : band) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%d,%.6g\n", p.energy, p.folded.k, p.folded.branch,
                  p.light_line);
    out += buf;
  }
  return out;
}

std::string format_eot_csv(const std::vector<EotResonance>& resonances) {
  std::string out(kEotHeader);
  out += '\n';
  char buf[96];
  for (const auto& r : resonances) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f\n", r.i, r.j, r.wavelength_nm);
    out += buf;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace plasmonq
