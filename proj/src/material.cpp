#include "plasmonq/material.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/text_format.hpp"
#include "plasmonq/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace plasmonq {

// Generated at configure time from data/gold_johnson_christy.csv.
extern const char* const kBundledGoldCsv;

namespace {

constexpr std::string_view kOpticalHeader = "wavelength_nm,n,k";

void validate(const DrudeModel& m) {
  if (!(m.omega_p > 0.0)) throw ConfigError("Drude omega_p must be > 0");
  if (!(m.gamma >= 0.0)) throw ConfigError("Drude gamma must be >= 0");
  if (!std::isfinite(m.eps_inf)) throw ConfigError("Drude eps_inf must be finite");
}

void validate(const TabulatedModel& m) {
  if (m.rows.size() < 2) throw ConfigError("optical table needs at least 2 rows");
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto& r = m.rows[i];
    if (!(r.n >= 0.0) || !(r.k >= 0.0))
      throw ConfigError("optical table row " + std::to_string(i + 1) + ": n and k must be >= 0");
    if (i > 0 && !(r.wavelength_nm > m.rows[i - 1].wavelength_nm))
      throw ConfigError("optical table row " + std::to_string(i + 1) +
                        ": wavelengths must be strictly increasing");
  }
}

void validate(const ConstantModel& m) {
  if (!std::isfinite(m.eps.real()) || !std::isfinite(m.eps.imag()))
    throw ConfigError("constant permittivity must be finite");
}

}  // namespace

MaterialModel::MaterialModel(Variant model, std::string name)
    : model_(std::move(model)), name_(std::move(name)) {
  std::visit([](const auto& m) { validate(m); }, model_);
}

MaterialModel MaterialModel::drude(double eps_inf, double omega_p_ev, double gamma_ev) {
  return MaterialModel(DrudeModel{eps_inf, omega_p_ev, gamma_ev}, "drude");
}

MaterialModel MaterialModel::constant(Complex eps) {
  return MaterialModel(ConstantModel{eps}, "constant");
}

MaterialModel MaterialModel::tabulated(std::vector<OpticalConstant> rows, std::string name) {
  return MaterialModel(TabulatedModel{std::move(rows)}, std::move(name));
}

MaterialModel MaterialModel::gold() {
  static const std::vector<OpticalConstant> rows = parse_optical_constants(kBundledGoldCsv);
  return tabulated(rows, "gold");
}

MaterialModel MaterialModel::gold_drude() { return drude(9.84, 9.0, 0.067); }

MaterialModel MaterialModel::perfect_conductor() { return constant({-1e12, 0.0}); }

Complex MaterialModel::permittivity(double wavelength_nm) const {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm))
    throw RangeError("wavelength must be positive", wavelength_nm);
  return std::visit(
      [&](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DrudeModel>) {
          const double w = units::wavelength_to_ev(wavelength_nm);
          return m.eps_inf - m.omega_p * m.omega_p / Complex(w * w, m.gamma * w);
        } else if constexpr (std::is_same_v<T, ConstantModel>) {
          return m.eps;
        } else {
          const auto& rows = m.rows;
          if (wavelength_nm < rows.front().wavelength_nm || wavelength_nm > rows.back().wavelength_nm) {
            throw RangeError("wavelength " + format_number(wavelength_nm) + " nm outside table range [" +
                                 format_number(rows.front().wavelength_nm) + ", " +
                                 format_number(rows.back().wavelength_nm) + "] nm of " + name_,
                             wavelength_nm);
          }
          auto hi = std::lower_bound(rows.begin(), rows.end(), wavelength_nm,
                                     [](const OpticalConstant& r, double x) { return r.wavelength_nm < x; });
          if (hi->wavelength_nm == wavelength_nm) return std::pow(Complex(hi->n, hi->k), 2);
          auto lo = std::prev(hi);
          const double t = (wavelength_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
          const Complex nk(lo->n + t * (hi->n - lo->n), lo->k + t * (hi->k - lo->k));
          return nk * nk;
        }
      },
      model_);
}

std::pair<double, double> MaterialModel::wavelength_range() const {
  if (const auto* t = std::get_if<TabulatedModel>(&model_))
    return {t->rows.front().wavelength_nm, t->rows.back().wavelength_nm};
  return {0.0, std::numeric_limits<double>::infinity()};
}

Complex permittivity(const MaterialModel& material, double wavelength_nm) {
  return material.permittivity(wavelength_nm);
}

std::vector<OpticalConstant> parse_optical_constants(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines.front()) != kOpticalHeader)
    throw DataError("optical constants line 1: expected header '" + std::string(kOpticalHeader) + "'");
  std::vector<OpticalConstant> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    const std::string where = "optical constants line " + std::to_string(i + 1);
    if (fields.size() != 3) throw DataError(where + ": expected 3 fields");
    rows.push_back({parse_double(fields[0], where), parse_double(fields[1], where),
                    parse_double(fields[2], where)});
  }
  // reuse the model invariants for ordering and sign checks
  try {
    validate(TabulatedModel{rows});
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  return rows;
}

std::vector<OpticalConstant> read_optical_constants(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open optical constants file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_optical_constants(ss.str());
}

std::string format_optical_constants(const std::vector<OpticalConstant>& rows) {
  std::string out(kOpticalHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.wavelength_nm) + ',' + format_number(r.n) + ',' + format_number(r.k) + '\n';
  }
  return out;
}

}  // namespace plasmonq
