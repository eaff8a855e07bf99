#ifndef RAMANPASS_STIRSAP_HPP
#define RAMANPASS_STIRSAP_HPP

#include <Eigen/Dense>

#include "ramanpass/schedule.hpp"

// Shortcut-to-adiabaticity view of the matched passage. The passage
// Hamiltonian decomposes as a counterdiabatically corrected reference pair
//     omega_p0 = (omega_s/2) tan(theta),  omega_s0 = omega_s/2,
// conjugated by the rotation V = exp(i phi (s23+s32)) with phi = pi/2 -
// theta. Scaling the reference by a factor eta reshapes the tracked dressed
// state and suppresses intermediate-level occupancy by
// 1 / (eta^2 sin^2 theta + cos^2 theta).
namespace raman::stirsap {

// Rotation angle of the eta-modified dressed-state transformation,
// arctan(cot(theta) / eta), with exact values at the boundaries
// (phi' = pi/2 at theta = 0, -> 0 as theta -> pi/2 for eta > 0).
double phi_prime(double theta, double eta);

// d(phi')/dtau by the chain rule; eta_dot = 0 for constant eta.
double phi_prime_rate(double theta, double theta_dot, double eta,
                      double eta_dot);

// Executable pulse pair of the eta-scaled protocol:
//   omega_p' = (omega_s/2) sqrt(1 + eta^2 tan^2 theta)
//   omega_s' = (eta/2) omega_s - d(phi')/dtau
// Throws SingularityError at cos(theta) <= 0.
Pulses eta_pulse_pair(double stokes, double theta, double eta,
                      double eta_dot);

// Dressed state cos(theta)|1> - i sin(theta) sin(phi')|2>
//                            - sin(theta) cos(phi')|3>.
Eigen::Vector3cd dressed_state_prime(double theta, double phi_prime);

struct Decomposition {
  double omega_p0;  // reference pump
  double omega_s0;  // reference Stokes
  double h_cd;      // counterdiabatic strength theta_dot = omega_s/2
  double phi;       // dressed rotation angle pi/2 - theta
};

Decomposition reconstruct_h0(const Protocol& p, double tau);

// Strength theta_dot of the |1><->|3> coupling that the matched passage
// makes unnecessary.
double counterdiabatic_term(const Protocol& p, double tau);

// Frobenius distance between the rotated corrected Hamiltonian
// V H_corr V^dag - i V dV^dag/dt and the passage Hamiltonian; zero when the
// decomposition is exact.
double decomposition_residual(double omega_p, double omega_s, double theta,
                              double phi, double phi_dot);
double verify_decomposition(const Protocol& p, double tau);

// A protocol with the eta-scaled pulse pair in place. Wraps a recompiled
// Protocol so it can be evolved directly.
class EtaProtocol {
 public:
  EtaProtocol(const ProtocolSpec& base, EtaSource eta);

  const Protocol& protocol() const { return protocol_; }
  double eta_at(double tau) const { return protocol_.eta(tau); }
  double phi_prime_at(double tau) const;
  Pulses pulses_at(double tau) const;
  Eigen::Vector3cd dressed_at(double tau) const;

 private:
  Protocol protocol_;
};

EtaProtocol build_eta_protocol(const ProtocolSpec& base, EtaSource eta);

}  // namespace raman::stirsap

#endif  // RAMANPASS_STIRSAP_HPP
