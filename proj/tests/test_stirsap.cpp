#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ramanpass/analysis.hpp"
#include "ramanpass/dsl.hpp"
#include "ramanpass/dynamics.hpp"
#include "ramanpass/invariant.hpp"
#include "ramanpass/stirsap.hpp"

using namespace raman;
using namespace raman::stirsap;

namespace {
constexpr double kPi = std::numbers::pi;

// Table reference columns (units of nu), for the reconstruction check.
double s0_closed(Family id, double tau) {
  switch (id) {
    case Family::A:
      return 0.5;
    case Family::B:
      return 1.0 / std::cosh(tau);
    case Family::C:
      return 1.0 / std::sqrt(1.0 - tau * tau);
    case Family::D:
      return 0.5 * tau;
    case Family::E:
      return 2.0 * tau / std::cosh(tau * tau);
    case Family::F:
      return std::exp(tau);
  }
  return 0.0;
}

double p0_closed(Family id, double tau) {
  switch (id) {
    case Family::A:
      return 0.5 * std::tan(0.5 * tau);
    case Family::B:
      return std::tanh(tau);
    case Family::C:
      return tau / (1.0 - tau * tau);
    case Family::D:
      return 0.5 * tau * std::tan(0.25 * tau * tau);
    case Family::E:
      return 2.0 * tau * std::tanh(tau * tau);
    case Family::F:
      return std::exp(tau) * std::tan(std::exp(tau) - 1.0);
  }
  return 0.0;
}

}  // namespace

TEST_CASE("reconstructed reference pulses match the table columns") {
  std::mt19937 rng(2024);
  for (Family id : {Family::A, Family::B, Family::C, Family::D, Family::E,
                    Family::F}) {
    CAPTURE(family_char(id));
    const Protocol p = Protocol::compile(builtin_family(id, 1.0));
    std::uniform_real_distribution<double> dist(p.tau0(), p.tau_end());
    for (int i = 0; i < 100; ++i) {
      const double tau = dist(rng);
      const Decomposition dec = reconstruct_h0(p, tau);
      const double s0 = s0_closed(id, tau);
      const double p0 = p0_closed(id, tau);
      CHECK(std::fabs(dec.omega_s0 - s0) <=
            1e-10 * std::max(1.0, std::fabs(s0)));
      CHECK(std::fabs(dec.omega_p0 - p0) <=
            1e-10 * std::max(1.0, std::fabs(p0)));
    }
  }
}

TEST_CASE("counterintuitive ordering at the start: s0 dominates p0") {
  const Protocol b = Protocol::compile(builtin_family(Family::B, 1.0));
  const Decomposition dec = reconstruct_h0(b, 0.0);
  CHECK(dec.omega_p0 == 0.0);  // tan(0)
  CHECK(dec.omega_s0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dec.phi == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("counterdiabatic strength is omega_s / 2") {
  const Protocol a = Protocol::compile(builtin_family(Family::A, 1.0));
  CHECK(counterdiabatic_term(a, 1.3) == doctest::Approx(0.5).epsilon(1e-15));
  const Protocol b = Protocol::compile(builtin_family(Family::B, 1.0));
  CHECK(counterdiabatic_term(b, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const Protocol e = Protocol::compile(builtin_family(Family::E, 1.0));
  CHECK(counterdiabatic_term(e, 0.0) == 0.0);
}

TEST_CASE("decomposition residual vanishes where it should") {
  const Protocol a = Protocol::compile(builtin_family(Family::A, 1.0));
  CHECK(verify_decomposition(a, 1.0) <= 1e-10);
  const Protocol d = Protocol::compile(builtin_family(Family::D, 1.0));
  CHECK(verify_decomposition(d, 1.5) <= 1e-10);
}

TEST_CASE("decomposition residual is sensitive to the rotation angle") {
  const Protocol a = Protocol::compile(builtin_family(Family::A, 1.0));
  const double tau = 1.0;
  const double theta = a.theta(tau);
  const Pulses pl = a.matched_pulses(tau, theta);
  const double residual = decomposition_residual(
      pl.omega_p, pl.omega_s, theta, kPi / 2 - theta + 0.1,
      -0.5 * pl.omega_s);
  CHECK(residual > 0.01);
}

TEST_CASE("phi prime boundaries and the eta=1 angle") {
  for (double eta : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(phi_prime(0.0, eta) == kPi / 2);  // exactly, via atan2
    CHECK(phi_prime(kPi / 2, eta) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  // eta = 1 degenerates to phi' = pi/2 - theta
  for (int i = 0; i <= 20; ++i) {
    const double theta = kPi / 2 * i / 20.0;
    CHECK(phi_prime(theta, 1.0) ==
          doctest::Approx(kPi / 2 - theta).epsilon(1e-13));
  }
  // negative eta mirrors the angle below zero
  CHECK(phi_prime(0.0, -2.0) == doctest::Approx(-kPi / 2));
  CHECK(phi_prime(kPi / 4, -2.0) ==
        doctest::Approx(-std::atan(0.5)).epsilon(1e-14));
}

TEST_CASE("phi prime rate: analytic form against finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> theta_dist(0.05, kPi / 2 - 0.05);
  for (double eta : {1.0, 2.0, 3.0}) {
    for (int i = 0; i < 200; ++i) {
      const double theta = theta_dist(rng);
      const double theta_dot = 0.7;
      const double h = 1e-6;
      const double fd = (phi_prime(theta + h * theta_dot, eta) -
                         phi_prime(theta - h * theta_dot, eta)) /
                        (2.0 * h);
      CHECK(phi_prime_rate(theta, theta_dot, eta, 0.0) ==
            doctest::Approx(fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("eta = 1 reproduces the original pulse pair") {
  for (Family id : {Family::A, Family::B}) {
    CAPTURE(family_char(id));
    const ProtocolSpec base = builtin_family(id, 1.0);
    const Protocol matched = Protocol::compile(base);
    const EtaProtocol ep = build_eta_protocol(base, 1.0);
    for (int i = 0; i <= 64; ++i) {
      const double tau = matched.tau0() +
                         (matched.tau_end() - matched.tau0()) * i / 64.0;
      const double theta = matched.theta(tau);
      const Pulses orig = matched.matched_pulses(tau, theta);
      const Pulses primed = eta_pulse_pair(orig.omega_s, theta, 1.0, 0.0);
      CHECK(std::fabs(primed.omega_p - orig.omega_p) <=
            1e-10 * std::max(1.0, std::fabs(orig.omega_p)));
      CHECK(std::fabs(primed.omega_s - orig.omega_s) <=
            1e-10 * std::max(1.0, std::fabs(orig.omega_s)));
    }
    CHECK(!ep.protocol().eta_mode());
  }
}

TEST_CASE("eta pulse spot value: eta=2 at theta=pi/4 with omega_s=nu") {
  const Pulses pl = eta_pulse_pair(1.0, kPi / 4, 2.0, 0.0);
  CHECK(pl.omega_p == doctest::Approx(0.5 * std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("dressed_state_prime markers") {
  CHECK((dressed_state_prime(0.0, 1.234) - Eigen::Vector3cd(1, 0, 0)).norm() ==
        0.0);
  const Eigen::Vector3cd end = dressed_state_prime(kPi / 2, 0.0);
  CHECK(std::abs(end[2] + 1.0) < 1e-15);
  const Eigen::Vector3cd mid = dressed_state_prime(kPi / 4, kPi / 4);
  CHECK(mid[0].real() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(mid[1].imag() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(mid[2].real() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(std::fabs(mid.norm() - 1.0) <= 1e-15);
}

TEST_CASE("eta protocols track the primed dressed state") {
  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  for (Family id : {Family::A, Family::B}) {
    for (double eta : {1.0, 2.0, 3.0}) {
      CAPTURE(family_char(id));
      CAPTURE(eta);
      ProtocolSpec spec = builtin_family(id, 1.0);
      spec.eta = eta;
      spec.samples = 301;
      const Protocol p = Protocol::compile(spec);
      const Trajectory traj = evolve(p, psi);
      const FidelityReport rep = fidelity_to_e0(p, traj);
      for (double f : rep.fidelity) CHECK(f >= 1.0 - 1e-6);
    }
  }
}

TEST_CASE("the executable eta Hamiltonian never couples 1 and 3") {
  ProtocolSpec spec = builtin_family(Family::A, 1.0);
  spec.eta = 2.5;
  const Protocol p = Protocol::compile(spec);
  const SampledSchedule s = sample_schedule(p);
  for (std::size_t i = 0; i < s.tau.size(); ++i) {
    const Eigen::Matrix3cd h = hamiltonian_matrix({s.omega_p[i],
                                                   s.omega_s[i]});
    CHECK(h(0, 2) == std::complex<double>(0.0, 0.0));
    CHECK(h(2, 0) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("time-dependent eta uses the chain rule with a sampled eta rate") {
  ProtocolSpec spec = builtin_family(Family::B, 1.0);
  spec.eta = DslExpression::parse("2+sin(t)/2");
  const Protocol p = Protocol::compile(spec);
  CHECK(p.eta_mode());
  CHECK(!p.eta_is_constant());
  CHECK(p.eta(1.0) == doctest::Approx(2.0 + 0.5 * std::sin(1.0)));
  CHECK(p.eta_rate(1.0) ==
        doctest::Approx(0.5 * std::cos(1.0)).epsilon(1e-9));
  // still a valid protocol: evolve keeps the norm
  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  const Trajectory traj = evolve(p, psi);
  CHECK(traj.norm_drift <= 1e-8);
  // and the dressed-prime tracking still holds
  const FidelityReport rep = fidelity_to_e0(p, traj);
  for (double f : rep.fidelity) CHECK(f >= 1.0 - 1e-6);
}

TEST_CASE("eta crossing zero is rejected") {
  ProtocolSpec spec = builtin_family(Family::B, 1.0);
  spec.eta = DslExpression::parse("sin(t)");  // zero at t = 0 and pi
  CHECK_THROWS_AS(Protocol::compile(spec), ValidationError);
}
