#pragma once

#include "plasmonq/counting.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace plasmonq {

/// Weighted least-squares fit of N(alpha) = c0 + c1 cos 2alpha + c2 sin 2alpha.
struct FringeFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double chi2 = 0.0;
  int n_points = 0;
  double beta_deg = 0.0;

  double amplitude() const;
  /// Angle (degrees) of the fringe maximum, in [0, 180).
  double phase_deg() const;
  double model(double alpha_deg) const;
};

struct VisibilityEstimate {
  double v = 0.0;
  double sigma_v = 0.0;
  double beta_fixed = 0.0;  // degrees
};

struct Correlation {
  double e = 0.0;
  double sigma = 0.0;
};

struct ChshResult {
  std::array<double, 4> e_values{};  // E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2)
  double s = 0.0;
  double sigma_s = 0.0;
  bool bell_violation = false;
  ChshAngles angles;
};

/// Requires >= 4 distinct alpha values sharing beta and integration time.
/// Throws InsufficientDataError / DataError on bad input and NumericalError
/// when the design matrix is rank deficient.
FringeFit fit_fringe(std::span<const CountRecord> records);

/// V = sqrt(c1^2 + c2^2) / c0 with first-order error propagation.
VisibilityEstimate visibility(const FringeFit& fit);

/// Records ordered (a,b), (a+90,b), (a,b+90), (a+90,b+90).
Correlation chsh_correlation(const std::array<CountRecord, 4>& records);

/// Correlations ordered (a1,b1), (a1,b2), (a2,b1), (a2,b2). A violation is
/// flagged when S - 2 > k * sigma_S.
ChshResult chsh_s(const std::array<Correlation, 4>& correlations, double k = 3.0,
                  const ChshAngles& angles = {});

/// Picks the 16 CHSH settings out of an arbitrary record list (angles compared
/// modulo 180 degrees; repeated settings are pooled) and evaluates S.
ChshResult estimate_chsh(std::span<const CountRecord> records, const ChshAngles& angles,
                         double k = 3.0);

enum class BoundKind { kFinite, kUnbounded };

struct DephasingBound {
  BoundKind kind = BoundKind::kFinite;
  double bound_fs = 0.0;  // +inf when kind == kUnbounded
  double v_low = 0.0;
  /// "no decoherence over t_p" read as T2* of order t_p, rounded to a power of ten.
  double order_of_magnitude_fs = 0.0;
};

/// Lower bound on the pure dephasing time under |<E_V|E_H>| = exp(-t_p / T2*).
/// Throws DataError when V - n_sigma * sigma_V <= 0.
DephasingBound dephasing_bound(const VisibilityEstimate& v, double t_p_fs, double n_sigma);

struct SpectrumSample {
  double wavelength_nm = 0.0;
  double transmission = 0.0;
};

struct LorentzianFit {
  double amplitude = 0.0;
  double center_ev = 0.0;
  double gamma_ev = 0.0;  // full width at half maximum
  double baseline = 0.0;
  double lifetime_fs = 0.0;
};

/// Fits A (G/2)^2 / ((E - E0)^2 + (G/2)^2) + B in photon energy and returns
/// hbar / G. Throws NumericalError when there is no peak or the fit diverges.
LorentzianFit lorentzian_fit(std::span<const SpectrumSample> spectrum);
double lorentzian_lifetime(std::span<const SpectrumSample> spectrum);

}  // namespace plasmonq
