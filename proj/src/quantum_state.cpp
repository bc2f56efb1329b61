#include "plasmonq/quantum_state.hpp"

#include "plasmonq/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace plasmonq {
namespace {

constexpr double kOverlapSlack = 1e-12;

double wrap_half_turn(double angle) {
  double r = std::fmod(angle, std::numbers::pi);
  if (r < 0.0) r += std::numbers::pi;
  // fmod can land exactly on pi after the shift for tiny negative inputs
  if (r >= std::numbers::pi) r -= std::numbers::pi;
  return r;
}

}  // namespace

void ChannelParams::validate() const {
  if (!std::isfinite(h.real()) || !std::isfinite(h.imag()) || !std::isfinite(v.real()) ||
      !std::isfinite(v.imag()) || !std::isfinite(delta_phi_c) ||
      !std::isfinite(env_overlap.real()) || !std::isfinite(env_overlap.imag())) {
    throw ConfigError("channel parameters must be finite");
  }
  if (std::abs(env_overlap) > 1.0 + kOverlapSlack) {
    throw ConfigError("environment overlap magnitude " + std::to_string(std::abs(env_overlap)) +
                      " exceeds 1");
  }
  if (std::abs(h) > 1.0 + kOverlapSlack || std::abs(v) > 1.0 + kOverlapSlack) {
    throw ConfigError("channel transmissions must satisfy |h| <= 1 and |v| <= 1");
  }
  if (std::abs(h) == 0.0 && std::abs(v) == 0.0) {
    throw ConfigError("channel blocks both polarizations (h = v = 0)");
  }
}

double ChannelParams::delta_phi() const {
  if (std::abs(h) == 0.0 || std::abs(v) == 0.0) return 0.0;
  return std::arg(v / h);
}

PolarizerPair PolarizerPair::canonical() const {
  return {wrap_half_turn(alpha), wrap_half_turn(beta)};
}

TwoQubitDensityMatrix::TwoQubitDensityMatrix(const Eigen::Matrix4cd& m) : m_(m) {
  if (!is_valid(m_)) throw NumericalError("matrix is not a valid two-qubit density matrix");
}

bool TwoQubitDensityMatrix::is_valid(const Eigen::Matrix4cd& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) return false;
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= kEigenFloor;
}

double TwoQubitDensityMatrix::project(const PolarizerPair& setting) const {
  const Eigen::Vector2d a = polarizer_state(setting.alpha);
  const Eigen::Vector2d b = polarizer_state(setting.beta);
  Eigen::Vector4cd ab;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ab(2 * i + j) = a(i) * b(j);
  const double p = (ab.adjoint() * m_ * ab)(0, 0).real();
  return std::clamp(p, 0.0, 1.0);
}

Eigen::Vector2d polarizer_state(double angle) {
  return {std::sin(angle), std::cos(angle)};
}

TwoQubitDensityMatrix initial_state(double delta_phi_c) {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(kHH) = 1.0 / std::numbers::sqrt2;
  psi(kVV) = std::polar(1.0 / std::numbers::sqrt2, delta_phi_c);
  return TwoQubitDensityMatrix(psi * psi.adjoint());
}

TwoQubitDensityMatrix reduced_density_matrix(const ChannelParams& channel) {
  channel.validate();
  const double hh = std::norm(channel.h);
  const double vv = std::norm(channel.v);
  const double norm = hh + vv;

  // Tr_env(|E_H><E_V|) = <E_V|E_H>
  const Complex v_tilde = channel.v * std::polar(1.0, channel.delta_phi_c);
  const Complex coherence = channel.h * std::conj(v_tilde) * channel.env_overlap / norm;

  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(kHH, kHH) = hh / norm;
  m(kVV, kVV) = vv / norm;
  m(kHH, kVV) = coherence;
  m(kVV, kHH) = std::conj(coherence);
  return TwoQubitDensityMatrix(m);
}

double coincidence_probability(const ChannelParams& channel, const PolarizerPair& setting) {
  channel.validate();
  const double abs_h = std::abs(channel.h);
  if (abs_h == 0.0) return reduced_density_matrix(channel).project(setting);

  const double ratio = std::abs(channel.v) / abs_h;
  const double sa = std::sin(setting.alpha), ca = std::cos(setting.alpha);
  const double sb = std::sin(setting.beta), cb = std::cos(setting.beta);
  // Interference phase carries arg<E_V|E_H> with the opposite sign to the
  // channel and setup phases; this is what the explicit state gives.
  const double phase =
      channel.delta_phi_env() - channel.delta_phi() - channel.delta_phi_c;
  const double p = (sa * sa * sb * sb + ratio * ratio * ca * ca * cb * cb +
                    0.5 * std::sin(2.0 * setting.alpha) * std::sin(2.0 * setting.beta) * ratio *
                        std::abs(channel.env_overlap) * std::cos(phase)) /
                   (1.0 + ratio * ratio);
  return std::clamp(p, 0.0, 1.0);
}

double coincidence_probability_oracle(const ChannelParams& channel,
                                      const PolarizerPair& setting) {
  channel.validate();
  const Complex c = channel.env_overlap;
  // Minimal dilation: <E_V|E_H> = c with both vectors normalized.
  const std::array<Complex, 2> env_h{Complex(1.0), Complex(0.0)};
  const std::array<Complex, 2> env_v{std::conj(c),
                                     Complex(std::sqrt(std::max(0.0, 1.0 - std::norm(c))))};

  // index = 4 * photon1 + 2 * photon2 + env, photon order (H, V)
  std::array<Complex, 8> psi{};
  const Complex v_tilde = channel.v * std::polar(1.0, channel.delta_phi_c);
  for (int e = 0; e < 2; ++e) {
    psi[4 * 0 + 2 * 0 + e] += channel.h * env_h[e];
    psi[4 * 1 + 2 * 1 + e] += v_tilde * env_v[e];
  }
  double norm2 = 0.0;
  for (const auto& amp : psi) norm2 += std::norm(amp);

  const Eigen::Vector2d a = polarizer_state(setting.alpha);
  const Eigen::Vector2d b = polarizer_state(setting.beta);
  double prob = 0.0;
  for (int e = 0; e < 2; ++e) {
    Complex amp = 0.0;
    for (int p1 = 0; p1 < 2; ++p1)
      for (int p2 = 0; p2 < 2; ++p2) amp += a(p1) * b(p2) * psi[4 * p1 + 2 * p2 + e];
    prob += std::norm(amp);
  }
  return prob / norm2;
}

}  // namespace plasmonq
