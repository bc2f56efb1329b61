#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace plasmonq {

using Complex = std::complex<double>;

/// eps = eps_inf - omega_p^2 / (omega^2 + i gamma omega), energies in eV.
struct DrudeModel {
  double eps_inf = 1.0;
  double omega_p = 0.0;
  double gamma = 0.0;
};

struct OpticalConstant {
  double wavelength_nm = 0.0;
  double n = 0.0;
  double k = 0.0;
};

/// Wavelength-tabulated (n, k), linearly interpolated, never extrapolated.
struct TabulatedModel {
  std::vector<OpticalConstant> rows;
};

/// Dispersionless permittivity (dielectric claddings, perfect-conductor limit).
struct ConstantModel {
  Complex eps{1.0, 0.0};
};

class MaterialModel {
 public:
  using Variant = std::variant<DrudeModel, TabulatedModel, ConstantModel>;

  /// Throws ConfigError if the model violates its invariants.
  explicit MaterialModel(Variant model, std::string name = {});

  static MaterialModel drude(double eps_inf, double omega_p_ev, double gamma_ev);
  static MaterialModel constant(Complex eps);
  static MaterialModel tabulated(std::vector<OpticalConstant> rows, std::string name = "table");

  /// Bundled gold optical constants (Johnson & Christy, 187-1937 nm).
  static MaterialModel gold();
  /// Drude fit to gold in the near infrared: eps_inf 9.84, 9.0 eV, 0.067 eV.
  static MaterialModel gold_drude();
  /// Metal with eps = -1e12 at every wavelength.
  static MaterialModel perfect_conductor();

  Complex permittivity(double wavelength_nm) const;
  /// Inclusive wavelength span where permittivity() is defined.
  std::pair<double, double> wavelength_range() const;
  const Variant& model() const { return model_; }
  const std::string& name() const { return name_; }

 private:
  Variant model_;
  std::string name_;
};

/// Free-function form; throws RangeError outside a table's span.
Complex permittivity(const MaterialModel& material, double wavelength_nm);

/// Parses the `wavelength_nm,n,k` optical-constants CSV (exact header).
std::vector<OpticalConstant> parse_optical_constants(std::string_view text);
std::vector<OpticalConstant> read_optical_constants(const std::filesystem::path& path);
std::string format_optical_constants(const std::vector<OpticalConstant>& rows);

}  // namespace plasmonq
