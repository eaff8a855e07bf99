#include "ramanpass/stirsap.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ramanpass/invariant.hpp"

namespace raman::stirsap {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

double phi_prime(double theta, double eta) {
  // atan2 keeps the boundaries exact: phi' = pi/2 at theta = 0 even though
  // cot(theta) overflows there.
  double phi = std::atan2(std::cos(theta), eta * std::sin(theta));
  if (eta < 0.0) phi -= std::numbers::pi;
  return phi;
}

double phi_prime_rate(double theta, double theta_dot, double eta,
                      double eta_dot) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double den = eta * eta * s * s + c * c;
  return -(eta * theta_dot + s * c * eta_dot) / den;
}

Pulses eta_pulse_pair(double stokes, double theta, double eta,
                      double eta_dot) {
  const double c = std::cos(theta);
  if (c <= 0.0)
    throw SingularityError("eta pulses singular at theta >= pi/2");
  const double s = std::sin(theta);
  const double theta_dot = 0.5 * stokes;
  // (omega_s/2) sqrt(1 + eta^2 tan^2 theta), written to stay stable as
  // theta approaches the cap.
  const double omega_p =
      0.5 * stokes / c * std::sqrt(c * c + eta * eta * s * s);
  const double omega_s =
      0.5 * eta * stokes - phi_prime_rate(theta, theta_dot, eta, eta_dot);
  return {omega_p, omega_s};
}

Eigen::Vector3cd dressed_state_prime(double theta, double phi_prime) {
  const double s = std::sin(theta);
  Eigen::Vector3cd v;
  v << std::cos(theta), -kI * s * std::sin(phi_prime),
      std::complex<double>(-s * std::cos(phi_prime), 0.0);
  return v;
}

Decomposition reconstruct_h0(const Protocol& p, double tau) {
  const double theta = p.theta(tau);
  const double f = p.stokes(tau);
  if (std::cos(theta) <= 0.0)
    throw SingularityError("reference pump singular at theta >= pi/2");
  return {0.5 * f * std::tan(theta), 0.5 * f, 0.5 * f,
          std::numbers::pi / 2 - theta};
}

double counterdiabatic_term(const Protocol& p, double tau) {
  return 0.5 * p.stokes(tau);
}

double decomposition_residual(double omega_p, double omega_s, double theta,
                              double phi, double phi_dot) {
  using Eigen::Matrix3cd;
  const Matrix3cd Kx = k_x();
  const Matrix3cd Ky = k_y();
  const Matrix3cd Kz = k_z();

  // Corrected Hamiltonian in the rotated (dark-state) frame.
  const Matrix3cd h_corr =
      omega_p * std::sin(theta) * Kx + 0.5 * omega_s * (Ky + Kz);

  // V = exp(i phi K_z); K_z^3 = K_z, so the exponential closes in
  // {I, K_z, K_z^2}.
  const Matrix3cd kz2 = Kz * Kz;
  const Matrix3cd v = Matrix3cd::Identity() +
                      (std::cos(phi) - 1.0) * kz2 +
                      kI * std::sin(phi) * Kz;
  // -i V dV^dag/dt = -phi_dot V K_z V^dag = -phi_dot K_z.
  const Matrix3cd rotated =
      v * h_corr * v.adjoint() - phi_dot * Kz;

  const Matrix3cd target = omega_p * Kx + omega_s * Kz;
  return (rotated - target).norm();
}

double verify_decomposition(const Protocol& p, double tau) {
  const double theta = p.theta(tau);
  const Pulses pl = p.matched_pulses(tau, theta);
  const double phi = std::numbers::pi / 2 - theta;
  const double phi_dot = -0.5 * pl.omega_s;
  return decomposition_residual(pl.omega_p, pl.omega_s, theta, phi, phi_dot);
}

namespace {
ProtocolSpec with_eta(const ProtocolSpec& base, EtaSource eta) {
  ProtocolSpec spec = base;
  spec.eta = std::move(eta);
  return spec;
}
}  // namespace

EtaProtocol::EtaProtocol(const ProtocolSpec& base, EtaSource eta)
    : protocol_(Protocol::compile(with_eta(base, std::move(eta)))) {}

double EtaProtocol::phi_prime_at(double tau) const {
  return phi_prime(protocol_.theta(tau), protocol_.eta(tau));
}

Pulses EtaProtocol::pulses_at(double tau) const {
  return protocol_.applied_pulses(tau);
}

Eigen::Vector3cd EtaProtocol::dressed_at(double tau) const {
  const double theta = protocol_.theta(tau);
  return dressed_state_prime(theta, phi_prime(theta, protocol_.eta(tau)));
}

EtaProtocol build_eta_protocol(const ProtocolSpec& base, EtaSource eta) {
  return EtaProtocol(base, std::move(eta));
}

}  // namespace raman::stirsap
