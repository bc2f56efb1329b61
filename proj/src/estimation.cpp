#include "plasmonq/estimation.hpp"

#include "plasmonq/errors.hpp"
#include "plasmonq/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace plasmonq {
namespace {

constexpr double kAngleTol = 1e-9;

bool same_angle_mod_180(double a_deg, double b_deg) {
  double d = std::fmod(a_deg - b_deg, 180.0);
  if (d < 0.0) d += 180.0;
  return d < kAngleTol || 180.0 - d < kAngleTol;
}

bool close_rel(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double FringeFit::amplitude() const { return std::hypot(c1, c2); }

double FringeFit::phase_deg() const {
  double deg = 0.5 * units::rad_to_deg(std::atan2(c2, c1));
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  return deg;
}

double FringeFit::model(double alpha_deg) const {
  const double two_a = 2.0 * units::deg_to_rad(alpha_deg);
  return c0 + c1 * std::cos(two_a) + c2 * std::sin(two_a);
}

FringeFit fit_fringe(std::span<const CountRecord> records) {
  if (records.empty()) throw InsufficientDataError("fringe fit needs records");
  const double beta = records.front().beta_deg;
  const double time = records.front().integration_time;
  std::set<double> alphas;
  for (const auto& r : records) {
    if (std::abs(r.beta_deg - beta) > kAngleTol)
      throw DataError("fringe fit records must share beta");
    if (!close_rel(r.integration_time, time))
      throw DataError("fringe fit records must share integration time");
    alphas.insert(r.alpha_deg);
  }
  if (alphas.size() < 4) {
    throw InsufficientDataError("fringe fit at beta=" + std::to_string(beta) + " needs >= 4 distinct alpha values, got " +
                                std::to_string(alphas.size()));
  }

  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    const double two_a = 2.0 * units::deg_to_rad(r.alpha_deg);
    design.row(i) << 1.0, std::cos(two_a), std::sin(two_a);
    y(i) = static_cast<double>(r.counts);
    w(i) = 1.0 / std::max(y(i), 1.0);
  }

  const Eigen::MatrixXd weighted = w.cwiseSqrt().asDiagonal() * design;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw NumericalError("fringe fit design matrix is rank deficient");

  const Eigen::Vector3d coef = qr.solve(w.cwiseSqrt().asDiagonal() * y);
  const Eigen::Matrix3d normal = weighted.transpose() * weighted;

  FringeFit fit;
  fit.c0 = coef(0);
  fit.c1 = coef(1);
  fit.c2 = coef(2);
  fit.covariance = normal.inverse();
  const Eigen::VectorXd resid = y - design * coef;
  fit.chi2 = resid.cwiseProduct(resid).dot(w);
  fit.n_points = static_cast<int>(n);
  fit.beta_deg = beta;
  return fit;
}

VisibilityEstimate visibility(const FringeFit& fit) {
  if (!(fit.c0 > 0.0)) throw NumericalError("invalid fringe fit: c0 <= 0");
  const double amp = fit.amplitude();
  const double v = amp / fit.c0;
  double var = 0.0;
  if (amp > 0.0) {
    const Eigen::Vector3d grad(-v / fit.c0, fit.c1 / (fit.c0 * amp), fit.c2 / (fit.c0 * amp));
    var = grad.dot(fit.covariance * grad);
  } else {
    // gradient undefined at zero amplitude; use the radial scale of (c1, c2)
    var = (fit.covariance(1, 1) + fit.covariance(2, 2)) / (fit.c0 * fit.c0);
  }
  return {v, std::sqrt(std::max(var, 0.0)), fit.beta_deg};
}

Correlation chsh_correlation(const std::array<CountRecord, 4>& r) {
  const auto& base = r[0];
  const bool layout_ok =
      same_angle_mod_180(r[1].alpha_deg, base.alpha_deg + 90.0) &&
      same_angle_mod_180(r[1].beta_deg, base.beta_deg) &&
      same_angle_mod_180(r[2].alpha_deg, base.alpha_deg) &&
      same_angle_mod_180(r[2].beta_deg, base.beta_deg + 90.0) &&
      same_angle_mod_180(r[3].alpha_deg, base.alpha_deg + 90.0) &&
      same_angle_mod_180(r[3].beta_deg, base.beta_deg + 90.0);
  if (!layout_ok) throw DataError("CHSH records are not (a,b), (a+90,b), (a,b+90), (a+90,b+90)");

  const double same = static_cast<double>(r[0].counts + r[3].counts);
  const double diff = static_cast<double>(r[1].counts + r[2].counts);
  const double total = same + diff;
  if (total <= 0.0) throw DataError("CHSH correlation undefined: zero total counts");
  const double e = (same - diff) / total;
  // dE/dN = (1 - E)/T for same-sign counts, -(1 + E)/T for the others
  const double var = (same * (1.0 - e) * (1.0 - e) + diff * (1.0 + e) * (1.0 + e)) / (total * total);
  return {e, std::sqrt(var)};
}

ChshResult chsh_s(const std::array<Correlation, 4>& c, double k, const ChshAngles& angles) {
  ChshResult out;
  for (std::size_t i = 0; i < 4; ++i) out.e_values[i] = c[i].e;
  out.s = c[0].e - c[1].e + c[2].e + c[3].e;
  double var = 0.0;
  for (const auto& x : c) var += x.sigma * x.sigma;
  out.sigma_s = std::sqrt(var);
  out.bell_violation = out.s - 2.0 > k * out.sigma_s;
  out.angles = angles;
  return out;
}

ChshResult estimate_chsh(std::span<const CountRecord> records, const ChshAngles& angles,
                         double k) {
  auto pooled = [&](double a, double b) {
    CountRecord acc{a, b, 0.0, 0};
    bool found = false;
    for (const auto& r : records) {
      if (same_angle_mod_180(r.alpha_deg, a) && same_angle_mod_180(r.beta_deg, b)) {
        acc.counts += r.counts;
        acc.integration_time += r.integration_time;
        found = true;
      }
    }
    if (!found) {
      throw InsufficientDataError("missing CHSH setting alpha=" + std::to_string(a) +
                                  " beta=" + std::to_string(b));
    }
    return acc;
  };

  std::array<Correlation, 4> corr;
  std::size_t idx = 0;
  for (double a : {angles.a1, angles.a2}) {
    for (double b : {angles.b1, angles.b2}) {
      const std::array<CountRecord, 4> quad{pooled(a, b), pooled(a + 90.0, b),
                                            pooled(a, b + 90.0), pooled(a + 90.0, b + 90.0)};
      for (const auto& q : quad) {
        if (!close_rel(q.integration_time, quad[0].integration_time))
          throw DataError("CHSH settings have unequal total integration time");
      }
      corr[idx++] = chsh_correlation(quad);
    }
  }
  return chsh_s(corr, k, angles);
}

DephasingBound dephasing_bound(const VisibilityEstimate& v, double t_p_fs, double n_sigma) {
  if (!(t_p_fs > 0.0)) throw ConfigError("propagation time must be > 0");
  if (!(v.v >= 0.0 && v.v <= 1.2)) throw DataError("visibility outside [0, 1.2]");

  DephasingBound out;
  out.v_low = v.v - n_sigma * v.sigma_v;
  out.order_of_magnitude_fs = std::pow(10.0, std::round(std::log10(t_p_fs)));
  if (out.v_low >= 1.0) {
    out.kind = BoundKind::kUnbounded;
    out.bound_fs = std::numeric_limits<double>::infinity();
    return out;
  }
  if (out.v_low <= 0.0)
    throw DataError("no dephasing bound: V - n*sigma_V <= 0");
  out.kind = BoundKind::kFinite;
  out.bound_fs = t_p_fs / (-std::log(out.v_low));
  return out;
}

LorentzianFit lorentzian_fit(std::span<const SpectrumSample> spectrum) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  if (n < 8) throw NumericalError("Lorentzian fit needs >= 8 spectral samples");

  Eigen::VectorXd energy(n), t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    energy(i) = units::wavelength_to_ev(spectrum[static_cast<std::size_t>(i)].wavelength_nm);
    t(i) = spectrum[static_cast<std::size_t>(i)].transmission;
  }

  Eigen::Index imax = 0, imin = 0;
  const double tmax = t.maxCoeff(&imax);
  const double tmin = t.minCoeff(&imin);
  const double span = tmax - tmin;
  const double e_lo = energy.minCoeff(), e_hi = energy.maxCoeff();
  if (!(span > 1e-9 * std::max(std::abs(tmax), 1e-300)) || energy(imax) == e_lo ||
      energy(imax) == e_hi)
    throw NumericalError("no peak found in spectrum");

  // half-maximum crossings give the starting width
  const double half = tmin + 0.5 * span;
  std::vector<double> above;
  for (Eigen::Index i = 0; i < n; ++i)
    if (t(i) >= half) above.push_back(energy(i));
  const auto [lo_it, hi_it] = std::minmax_element(above.begin(), above.end());
  double gamma0 = *hi_it - *lo_it;
  if (!(gamma0 > 0.0)) gamma0 = (e_hi - e_lo) / static_cast<double>(n);

  Eigen::Vector4d p(span, energy(imax), gamma0, tmin);  // A, E0, Gamma, B
  auto residuals = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const double hw = 0.5 * q(2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = energy(i) - q(1);
      const double den = d * d + hw * hw;
      const double shape = hw * hw / den;
      r(i) = q(0) * shape + q(3) - t(i);
      if (jac) {
        (*jac)(i, 0) = shape;
        (*jac)(i, 1) = q(0) * hw * hw * 2.0 * d / (den * den);
        (*jac)(i, 2) = q(0) * (hw * d * d / (den * den));  // d shape / d Gamma
        (*jac)(i, 3) = 1.0;
      }
    }
  };

  Eigen::VectorXd r(n), r_trial(n);
  Eigen::MatrixXd jac(n, 4);
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 500 && !converged; ++iter) {
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d grad = jac.transpose() * r;
    Eigen::Matrix4d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
    const Eigen::Vector4d step = damped.ldlt().solve(-grad);
    const Eigen::Vector4d trial = p + step;
    if (trial(2) > 0.0) {
      residuals(trial, r_trial, nullptr);
      const double trial_cost = r_trial.squaredNorm();
      if (trial_cost < cost) {
        const double rel = (cost - trial_cost) / std::max(cost, 1e-300);
        p = trial;
        cost = trial_cost;
        residuals(p, r, &jac);
        lambda = std::max(lambda * 0.3, 1e-12);
        if (rel < 1e-14 || step.norm() < 1e-14 * (p.norm() + 1e-14)) converged = true;
        continue;
      }
    }
    lambda *= 10.0;
    // no downhill step left at any damping: local minimum
    if (lambda > 1e12) converged = true;
  }

  if (!converged || !p.allFinite() || p(2) <= 0.0 || p(0) <= 0.0 || p(1) < e_lo || p(1) > e_hi)
    throw NumericalError("Lorentzian fit did not converge");

  LorentzianFit fit;
  fit.amplitude = p(0);
  fit.center_ev = p(1);
  fit.gamma_ev = p(2);
  fit.baseline = p(3);
  fit.lifetime_fs = units::kHbarEvFs / p(2);
  return fit;
}

double lorentzian_lifetime(std::span<const SpectrumSample> spectrum) {
  return lorentzian_fit(spectrum).lifetime_fs;
}

}  // namespace plasmonq
