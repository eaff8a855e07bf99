#ifndef RAMANPASS_INVARIANT_HPP
#define RAMANPASS_INVARIANT_HPP

#include <Eigen/Dense>
#include <array>

#include "ramanpass/dynamics.hpp"
#include "ramanpass/schedule.hpp"

// The dynamical invariant of the matched passage,
//     I(theta) = sin^2(theta) K_x - sin(theta)cos(theta) K_y
//                + cos(theta) K_z,
// in the su(2) basis K_x = s12+s21, K_y = i(s13-s31), K_z = s23+s32 with
// [K_a, K_b] = i eps_abc K_c. I satisfies dI/dt = -i [H, I] for matched
// pulses; its spectrum is {0, +1, -1} at all times, and the zero-eigenvalue
// dressed state
//     |e0> = cos(theta)|1> - i sin(theta)cos(theta)|2> - sin^2(theta)|3>
// solves the Schroedinger equation exactly with vanishing Lewis-Riesenfeld
// phase.
namespace raman {

Eigen::Matrix3cd k_x();
Eigen::Matrix3cd k_y();
Eigen::Matrix3cd k_z();

struct InvariantFrame {
  double chi1;  // K_x coefficient, sin^2(theta)
  double chi2;  // K_y coefficient, -sin(theta)cos(theta)
  double chi3;  // K_z coefficient, cos(theta)
};

InvariantFrame invariant_at(double theta);

Eigen::Matrix3cd invariant_matrix(const InvariantFrame& frame);

struct Eigensystem {
  std::array<double, 3> values;  // ordered lambda0, lambda+, lambda-
  StateVector e0, ep, em;
};

// Eigen-decomposition with the phase convention that the |1> coefficient of
// each eigenvector is real and non-negative (fallback: first nonzero
// coefficient real positive).
Eigensystem eigensystem_of(const InvariantFrame& frame);

// Zero-eigenvalue dressed state in its closed form; continuous in theta
// (equals -|3> at theta = pi/2, where the literal phase convention of
// eigensystem_of would flip the sign).
StateVector dressed_state(double theta);
// d|e0>/dtheta, for analytic phase-rate evaluation.
StateVector dressed_state_dtheta(double theta);

// Frobenius norm of dI/dt + i [H, I] with dI/dt from the analytic component
// rates (chi1' = -omega_s chi2, chi2' = omega_s chi1 - omega_p chi3,
// chi3' = omega_p chi2 hold exactly for matched pulses). theta_dot is taken
// as omega_s / 2.
double invariant_residual(const Pulses& pulses, double theta);
// Euclidean norm of (analytic chi rates) - (component ODE right-hand side).
double component_ode_residual(const Pulses& pulses, double theta);

double invariant_residual(const Protocol& p, double tau);

// <e0| (i d/dt - H) |e0>, the Lewis-Riesenfeld phase rate of the tracked
// dressed state; identically zero for matched pulses and for eta-scaled
// protocols (which track the primed dressed state instead).
double lr_phase_rate(const Protocol& p, double tau);
double lr_phase_rate(const Protocol& p, double tau, double theta);

struct FidelityReport {
  std::vector<double> fidelity;       // |<dressed|psi>|^2 per row
  std::vector<double> norm_distance;  // ||psi - dressed|| per row
};

// Per-row overlap of a trajectory with the tracked dressed state (e0 for
// matched protocols, the primed dressed state for eta protocols). The norm
// distance is meaningful because the accumulated phase is zero.
FidelityReport fidelity_to_e0(const Protocol& p, const Trajectory& traj);

}  // namespace raman

#endif  // RAMANPASS_INVARIANT_HPP
