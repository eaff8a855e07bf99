#ifndef RAMANPASS_DYNAMICS_HPP
#define RAMANPASS_DYNAMICS_HPP

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "ramanpass/schedule.hpp"

// Time evolution of the three-level state under
//     H(tau) = omega_p (s12 + s21) + omega_s (s23 + s32)
// in units of nu (one-photon resonance; zero diagonal; no 1-3 coupling).
namespace raman {

using StateVector = Eigen::Vector3cd;

// A Hamiltonian frame is fully specified by the instantaneous pulse pair.
using HamiltonianFrame = Pulses;

Eigen::Matrix3cd hamiltonian_matrix(const Pulses& pulses);

// Applied pulses at tau with theta computed standalone.
Pulses hamiltonian_at(const Protocol& p, double tau);

std::array<double, 3> populations(const StateVector& psi);

struct TrajectoryRow {
  double tau;
  StateVector psi;
  std::array<double, 3> populations;
  double theta;
  double invariant_residual;  // Frobenius residual of the invariant equation
  double dressed_fidelity;    // |<dressed|psi>|^2
  double accumulated_phase;   // integral of the LR phase rate up to tau
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  double norm_drift = 0.0;  // max | ||psi|| - 1 | over the rows
  bool capped = false;
  double tau_end = 0.0;
};

// Adaptive Dormand-Prince 5(4) integration of i dpsi/dtau = H psi with
// theta co-integrated (theta' = omega_s / 2); rows are reported on a
// uniform grid of spec.samples points via dense output. Norm drift is
// reported, never corrected. tau_end_request (dimensionless) defaults to
// the protocol domain end.
Trajectory evolve(const Protocol& p, const StateVector& initial,
                  std::optional<double> tau_end_request = {});

// Fixed-step reference propagator: a 4th-order Suzuki composition of
// midpoint-Hamiltonian matrix exponentials (3x3 Hermitian exponential via
// spectral decomposition), with theta advanced by Gauss-Legendre panels.
// Independent of the adaptive path; serves as its brute-force oracle.
StateVector propagate_reference(const Protocol& p, const StateVector& initial,
                                double tau_end, long steps);

// exp(-i dt H) psi for the zero-diagonal Lambda Hamiltonian, through its
// exact spectral decomposition (eigenvalues 0, +/- Omega).
StateVector apply_exponential(const Pulses& pulses, double dt,
                              const StateVector& psi);

}  // namespace raman

#endif  // RAMANPASS_DYNAMICS_HPP
