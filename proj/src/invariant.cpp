#include "ramanpass/invariant.hpp"

#include <cmath>
#include <complex>

#include "ramanpass/stirsap.hpp"

namespace raman {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

Eigen::Matrix3cd k_x() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Eigen::Matrix3cd k_y() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 2) = kI;
  m(2, 0) = -kI;
  return m;
}

Eigen::Matrix3cd k_z() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}

InvariantFrame invariant_at(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {s * s, -s * c, c};
}

Eigen::Matrix3cd invariant_matrix(const InvariantFrame& frame) {
  return frame.chi1 * k_x() + frame.chi2 * k_y() + frame.chi3 * k_z();
}

namespace {

void fix_phase(StateVector& v) {
  int pivot = 0;
  while (pivot < 3 && std::abs(v[pivot]) < 1e-12) ++pivot;
  if (pivot == 3) return;
  const std::complex<double> z = v[pivot];
  v *= std::conj(z) / std::abs(z);
}

}  // namespace

Eigensystem eigensystem_of(const InvariantFrame& frame) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(
      invariant_matrix(frame));
  // Ascending eigenvalues (-|chi|, 0, +|chi|) -> report (0, +, -).
  Eigensystem sys;
  sys.values = {solver.eigenvalues()[1], solver.eigenvalues()[2],
                solver.eigenvalues()[0]};
  sys.e0 = solver.eigenvectors().col(1);
  sys.ep = solver.eigenvectors().col(2);
  sys.em = solver.eigenvectors().col(0);
  fix_phase(sys.e0);
  fix_phase(sys.ep);
  fix_phase(sys.em);
  return sys;
}

StateVector dressed_state(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  StateVector v;
  v << c, -kI * s * c, std::complex<double>(-s * s, 0.0);
  return v;
}

StateVector dressed_state_dtheta(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  StateVector v;
  v << -s, -kI * std::cos(2.0 * theta),
      std::complex<double>(-2.0 * s * c, 0.0);
  return v;
}

namespace {

struct ChiRates {
  double d1, d2, d3;
};

// d/dt of (sin^2, -sin cos, cos) with theta_dot = omega_s / 2.
ChiRates analytic_rates(double theta, double omega_s) {
  const double theta_dot = 0.5 * omega_s;
  return {theta_dot * std::sin(2.0 * theta),
          -theta_dot * std::cos(2.0 * theta),
          -theta_dot * std::sin(theta)};
}

}  // namespace

double invariant_residual(const Pulses& pulses, double theta) {
  const InvariantFrame frame = invariant_at(theta);
  const ChiRates rates = analytic_rates(theta, pulses.omega_s);
  const Eigen::Matrix3cd di =
      rates.d1 * k_x() + rates.d2 * k_y() + rates.d3 * k_z();
  const Eigen::Matrix3cd h =
      pulses.omega_p * k_x() + pulses.omega_s * k_z();
  const Eigen::Matrix3cd i_mat = invariant_matrix(frame);
  const Eigen::Matrix3cd residual = di + kI * (h * i_mat - i_mat * h);
  return residual.norm();
}

double component_ode_residual(const Pulses& pulses, double theta) {
  const InvariantFrame f = invariant_at(theta);
  const ChiRates rates = analytic_rates(theta, pulses.omega_s);
  const double r1 = rates.d1 - (-pulses.omega_s * f.chi2);
  const double r2 = rates.d2 - (pulses.omega_s * f.chi1 -
                                pulses.omega_p * f.chi3);
  const double r3 = rates.d3 - pulses.omega_p * f.chi2;
  return std::sqrt(r1 * r1 + r2 * r2 + r3 * r3);
}

double invariant_residual(const Protocol& p, double tau) {
  const double theta = p.theta(tau);
  return invariant_residual(p.applied_pulses(tau, theta), theta);
}

double lr_phase_rate(const Protocol& p, double tau, double theta) {
  const Pulses pl = p.applied_pulses(tau, theta);
  const double theta_dot = 0.5 * p.stokes(tau);

  StateVector state, dstate_dt;
  if (!p.eta_mode()) {
    state = dressed_state(theta);
    dstate_dt = theta_dot * dressed_state_dtheta(theta);
  } else {
    const double eta = p.eta(tau);
    const double phi = stirsap::phi_prime(theta, eta);
    const double phi_dot =
        stirsap::phi_prime_rate(theta, theta_dot, eta, p.eta_rate(tau));
    state = stirsap::dressed_state_prime(theta, phi);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    StateVector dtheta_part, dphi_part;
    dtheta_part << -s, -kI * c * std::sin(phi),
        std::complex<double>(-c * std::cos(phi), 0.0);
    dphi_part << 0.0, -kI * s * std::cos(phi),
        std::complex<double>(s * std::sin(phi), 0.0);
    dstate_dt = theta_dot * dtheta_part + phi_dot * dphi_part;
  }

  const Eigen::Matrix3cd h = hamiltonian_matrix(pl);
  const std::complex<double> rate =
      state.dot(kI * dstate_dt) - state.dot(h * state);
  return rate.real();
}

double lr_phase_rate(const Protocol& p, double tau) {
  return lr_phase_rate(p, tau, p.theta(tau));
}

FidelityReport fidelity_to_e0(const Protocol& p, const Trajectory& traj) {
  FidelityReport report;
  report.fidelity.reserve(traj.rows.size());
  report.norm_distance.reserve(traj.rows.size());
  for (const TrajectoryRow& row : traj.rows) {
    StateVector target;
    if (!p.eta_mode()) {
      target = dressed_state(row.theta);
    } else {
      target = stirsap::dressed_state_prime(
          row.theta, stirsap::phi_prime(row.theta, p.eta(row.tau)));
    }
    const std::complex<double> overlap = target.dot(row.psi);
    report.fidelity.push_back(std::norm(overlap));
    report.norm_distance.push_back((row.psi - target).norm());
  }
  return report;
}

}  // namespace raman
