#include "ramanpass/dynamics.hpp"

#include <cmath>
#include <complex>

#include "ramanpass/invariant.hpp"
#include "ramanpass/ode.hpp"
#include "ramanpass/quadrature.hpp"
#include "ramanpass/stirsap.hpp"

namespace raman {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

Eigen::Matrix3cd hamiltonian_matrix(const Pulses& pulses) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = h(1, 0) = pulses.omega_p;
  h(1, 2) = h(2, 1) = pulses.omega_s;
  return h;
}

Pulses hamiltonian_at(const Protocol& p, double tau) {
  return p.applied_pulses(tau);
}

std::array<double, 3> populations(const StateVector& psi) {
  return {std::norm(psi[0]), std::norm(psi[1]), std::norm(psi[2])};
}

namespace {

using Vec7 = ode::Vec<7>;

Vec7 pack(const StateVector& psi, double theta) {
  Vec7 y;
  y << psi[0].real(), psi[0].imag(), psi[1].real(), psi[1].imag(),
      psi[2].real(), psi[2].imag(), theta;
  return y;
}

StateVector unpack(const Vec7& y) {
  StateVector psi;
  psi << std::complex<double>(y[0], y[1]), std::complex<double>(y[2], y[3]),
      std::complex<double>(y[4], y[5]);
  return psi;
}

double dressed_overlap(const Protocol& p, double tau, double theta,
                       const StateVector& psi) {
  StateVector target;
  if (!p.eta_mode()) {
    target = dressed_state(theta);
  } else {
    target = stirsap::dressed_state_prime(
        theta, stirsap::phi_prime(theta, p.eta(tau)));
  }
  return std::norm(target.dot(psi));
}

}  // namespace

Trajectory evolve(const Protocol& p, const StateVector& initial,
                  std::optional<double> tau_end_request) {
  const double tau0 = p.tau0();
  double tau_end = tau_end_request.value_or(p.tau_end());
  const double slack = 1e-9 * std::max(1.0, std::fabs(p.tau_end()));
  if (tau_end < tau0 - slack || tau_end > p.tau_end() + slack)
    throw ValidationError("requested end time outside the protocol domain");
  tau_end = std::clamp(tau_end, tau0, p.tau_end());

  auto rhs = [&p](double tau, const Vec7& y) {
    const double theta = y[6];
    const Pulses pl = p.applied_pulses(tau, theta);
    Vec7 dy;
    // i dpsi/dtau = H psi, split into real and imaginary parts.
    dy[0] = pl.omega_p * y[3];
    dy[1] = -pl.omega_p * y[2];
    dy[2] = pl.omega_p * y[1] + pl.omega_s * y[5];
    dy[3] = -(pl.omega_p * y[0] + pl.omega_s * y[4]);
    dy[4] = pl.omega_s * y[3];
    dy[5] = -pl.omega_s * y[2];
    dy[6] = 0.5 * p.stokes(tau);
    return dy;
  };

  const int samples = p.spec().samples;
  std::vector<double> grid;
  if (tau_end == tau0 || samples == 1) {
    grid = {tau_end};
  } else {
    grid.resize(samples);
    for (int i = 0; i < samples; ++i)
      grid[i] = tau0 + (tau_end - tau0) *
                           (static_cast<double>(i) / (samples - 1));
    grid.back() = tau_end;
  }

  Trajectory traj;
  traj.capped = p.capped();
  traj.tau_end = tau_end;
  traj.rows.reserve(grid.size());

  double phase_acc = 0.0;
  double prev_rate = 0.0;
  double prev_tau = tau0;
  auto emit = [&](double tau, const StateVector& psi, double theta) {
    TrajectoryRow row;
    row.tau = tau;
    row.psi = psi;
    row.theta = theta;
    row.populations = populations(psi);
    row.invariant_residual =
        invariant_residual(p.applied_pulses(tau, theta), theta);
    row.dressed_fidelity = dressed_overlap(p, tau, theta, psi);
    const double rate = lr_phase_rate(p, tau, theta);
    if (!traj.rows.empty())
      phase_acc += 0.5 * (prev_rate + rate) * (tau - prev_tau);
    row.accumulated_phase = phase_acc;
    prev_rate = rate;
    prev_tau = tau;
    traj.norm_drift =
        std::max(traj.norm_drift, std::fabs(psi.norm() - 1.0));
    traj.rows.push_back(std::move(row));
  };

  std::size_t next = 0;
  while (next < grid.size() && grid[next] <= tau0) {
    emit(tau0, initial, 0.0);
    ++next;
  }

  if (tau_end > tau0) {
    const Vec7 y0 = pack(initial, 0.0);
    ode::Options opt{p.spec().tol.rtol, p.spec().tol.atol, 0.0};
    ode::integrate<7>(rhs, tau0, y0, tau_end, opt,
                      [&](const ode::Step<7>& s) {
                        while (next < grid.size() && grid[next] <= s.t1) {
                          const Vec7 y = (grid[next] == s.t1)
                                             ? s.y1
                                             : s.at(grid[next]);
                          emit(grid[next], unpack(y), y[6]);
                          ++next;
                        }
                        return next >= grid.size() ? ode::Control::Stop
                                                   : ode::Control::Continue;
                      });
  }
  return traj;
}

StateVector apply_exponential(const Pulses& pulses, double dt,
                              const StateVector& psi) {
  const double op = pulses.omega_p;
  const double os = pulses.omega_s;
  const double omega = std::hypot(op, os);
  if (omega == 0.0) return psi;

  // H = op Kx + os Kz has spectrum {0, +/-omega} with real eigenvectors
  //   v0 = (os, 0, -op)/omega,  v+- = (op, +-omega, os)/(sqrt(2) omega).
  const Eigen::Vector3d v0(os / omega, 0.0, -op / omega);
  const double inv = 1.0 / (std::numbers::sqrt2 * omega);
  const Eigen::Vector3d vp(op * inv, omega * inv, os * inv);
  const Eigen::Vector3d vm(op * inv, -omega * inv, os * inv);

  const std::complex<double> a0 = v0.cast<std::complex<double>>().dot(psi);
  const std::complex<double> ap = vp.cast<std::complex<double>>().dot(psi);
  const std::complex<double> am = vm.cast<std::complex<double>>().dot(psi);
  const std::complex<double> phase = std::exp(-kI * (dt * omega));

  return a0 * v0.cast<std::complex<double>>() +
         phase * ap * vp.cast<std::complex<double>>() +
         std::conj(phase) * am * vm.cast<std::complex<double>>();
}

StateVector propagate_reference(const Protocol& p, const StateVector& initial,
                                double tau_end, long steps) {
  if (steps < 1) throw ValidationError("steps must be >= 1");
  const double tau0 = p.tau0();
  const double slack = 1e-9 * std::max(1.0, std::fabs(p.tau_end()));
  if (tau_end < tau0 - slack || tau_end > p.tau_end() + slack)
    throw ValidationError("requested end time outside the protocol domain");
  tau_end = std::clamp(tau_end, tau0, p.tau_end());
  if (tau_end == tau0) return initial;

  // Suzuki fractal composition of the exponential midpoint rule; the five
  // substep fractions keep every Hamiltonian evaluation inside the step.
  const double sp = 1.0 / (4.0 - std::cbrt(4.0));
  const double w[5] = {sp, sp, 1.0 - 4.0 * sp, sp, sp};

  const double h = (tau_end - tau0) / static_cast<double>(steps);
  auto half_stokes = [&p](double u) { return 0.5 * p.stokes(u); };

  StateVector psi = initial;
  double theta = 0.0;
  for (long k = 0; k < steps; ++k) {
    double s0 = tau0 + h * static_cast<double>(k);
    for (int j = 0; j < 5; ++j) {
      const double dt = w[j] * h;
      const double s1 = s0 + dt;
      const double mid = 0.5 * (s0 + s1);
      const double theta_mid = theta + gauss3(half_stokes, s0, mid);
      psi = apply_exponential(p.applied_pulses(mid, theta_mid), dt, psi);
      theta += gauss3(half_stokes, s0, s1);
      s0 = s1;
    }
  }
  return psi;
}

}  // namespace raman
