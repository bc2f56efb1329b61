#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace plasmonq {

using Complex = std::complex<double>;

/// Lossy, dephasing channel acting on the polarization-entangled pair.
///
/// `h` and `v` are the complex amplitude transmissions of the H and V
/// components, `delta_phi_c` the source birefringence phase between |HH> and
/// |VV>, and `env_overlap` the inner product <E_V|E_H> of the environment
/// states the two components leave behind.
struct ChannelParams {
  Complex h{1.0, 0.0};
  Complex v{1.0, 0.0};
  double delta_phi_c = 0.0;  // radians
  Complex env_overlap{1.0, 0.0};

  /// Throws ConfigError when |env_overlap| > 1, |h| or |v| > 1, or h = v = 0.
  void validate() const;

  /// arg(v/h); zero when either amplitude vanishes.
  double delta_phi() const;
  /// arg(<E_V|E_H>).
  double delta_phi_env() const { return std::arg(env_overlap); }

  static ChannelParams identity() { return {}; }
  /// Balanced channel (h = v = 1, no setup phase) with a real overlap.
  static ChannelParams balanced(double overlap) {
    ChannelParams c;
    c.env_overlap = overlap;
    return c;
  }
};

/// Polarizer directions, radians from the vertical axis.
struct PolarizerPair {
  double alpha = 0.0;
  double beta = 0.0;

  /// Both angles reduced into [0, pi); a linear polarizer is pi-periodic.
  PolarizerPair canonical() const;

  static PolarizerPair from_degrees(double alpha_deg, double beta_deg) {
    constexpr double k = std::numbers::pi / 180.0;
    return {alpha_deg * k, beta_deg * k};
  }
};

/// Single-photon polarization basis order is (H, V); two-photon order is
/// HH, HV, VH, VV.
enum TwoPhotonIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

class TwoQubitDensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  /// Throws NumericalError if the matrix is not a valid density matrix.
  explicit TwoQubitDensityMatrix(const Eigen::Matrix4cd& m);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  double trace() const { return m_.trace().real(); }
  double purity() const { return (m_ * m_).trace().real(); }
  /// <alpha, beta| rho |alpha, beta>.
  double project(const PolarizerPair& setting) const;

  static bool is_valid(const Eigen::Matrix4cd& m);

 private:
  Eigen::Matrix4cd m_;
};

/// Pass axis of a linear polarizer: cos(a)|V> + sin(a)|H>, in (H, V) order.
Eigen::Vector2d polarizer_state(double angle);

/// (|HH> + e^{i delta_phi_c}|VV>)/sqrt(2) as a density matrix.
TwoQubitDensityMatrix initial_state(double delta_phi_c);

/// Environment-traced two-photon state conditioned on both photons surviving.
TwoQubitDensityMatrix reduced_density_matrix(const ChannelParams& channel);

/// Closed-form coincidence probability for a polarizer setting. Falls back to
/// the density-matrix route when |h| = 0.
double coincidence_probability(const ChannelParams& channel, const PolarizerPair& setting);

/// Independent check of coincidence_probability: builds the full
/// photon x photon x environment state vector (8 amplitudes), normalizes it,
/// projects the photons and returns the squared norm.
double coincidence_probability_oracle(const ChannelParams& channel,
                                      const PolarizerPair& setting);

}  // namespace plasmonq
