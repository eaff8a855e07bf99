#include "ramanpass/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ramanpass/ode.hpp"
#include "ramanpass/quadrature.hpp"
#include "ramanpass/stirsap.hpp"

namespace raman {

char family_char(Family f) {
  switch (f) {
    case Family::A:
      return 'a';
    case Family::B:
      return 'b';
    case Family::C:
      return 'c';
    case Family::D:
      return 'd';
    case Family::E:
      return 'e';
    case Family::F:
      return 'f';
  }
  return '?';
}

Family family_from_char(char c) {
  switch (c) {
    case 'a':
      return Family::A;
    case 'b':
      return Family::B;
    case 'c':
      return Family::C;
    case 'd':
      return Family::D;
    case 'e':
      return Family::E;
    case 'f':
      return Family::F;
    default:
      throw ValidationError(std::string("unknown family '") + c +
                            "' (expected a-f)");
  }
}

DslExpression DslExpression::parse(std::string source_text) {
  DslExpression e;
  e.ast = std::shared_ptr<const dsl::Expr>(dsl::parse(source_text));
  e.source = std::move(source_text);
  return e;
}

namespace {

double default_window(Family id) {
  switch (id) {
    case Family::A:
      return 3.2;
    case Family::B:
      return 5.8;
    case Family::C:
      return 1.0;
    case Family::D:
      return 2.6;
    case Family::E:
      return 2.44;
    case Family::F:
      return 1.0;
  }
  return 0.0;
}

// Dimensionless Stokes envelopes, tau = nu * t.
std::function<double(double)> builtin_stokes(Family id) {
  switch (id) {
    case Family::A:
      return [](double) { return 1.0; };
    case Family::B:
      return [](double tau) { return 2.0 / std::cosh(tau); };
    case Family::C:
      return [](double tau) {
        const double s = 1.0 - tau * tau;
        if (s <= 0.0)
          throw EvalDomainError("family-c envelope undefined at |nu t| >= 1");
        return 2.0 / std::sqrt(s);
      };
    case Family::D:
      return [](double tau) { return tau; };
    case Family::E:
      return [](double tau) { return 4.0 * tau / std::cosh(tau * tau); };
    case Family::F:
      return [](double tau) { return 2.0 * std::exp(tau); };
  }
  return {};
}

}  // namespace

ProtocolSpec builtin_family(Family id, double nu) {
  if (!(nu > 0.0)) throw ValidationError("nu must be positive");
  ProtocolSpec spec;
  spec.name = std::string("builtin-") + family_char(id);
  spec.envelope = id;
  spec.nu = nu;
  spec.t0 = 0.0;
  spec.t_max = default_window(id) / nu;
  return spec;
}

Protocol Protocol::compile(const ProtocolSpec& spec) {
  if (!(spec.nu > 0.0)) throw ValidationError("nu must be positive");
  if (!(spec.t_max >= spec.t0))
    throw ValidationError("t_max must not precede t0");
  if (!(spec.theta_cap > 0.0) || !(spec.theta_cap < std::numbers::pi / 2))
    throw ValidationError("theta_cap must lie in (0, pi/2)");
  if (spec.samples < 1) throw ValidationError("samples must be >= 1");
  if (!(spec.tol.rtol > 0.0) || !(spec.tol.atol > 0.0))
    throw ValidationError("tolerances must be positive");
  if (!(spec.threshold > 0.0) || !(spec.threshold < 1.0))
    throw ValidationError("threshold must lie in (0, 1)");

  Protocol p;
  p.spec_ = spec;
  p.tau0_ = spec.nu * spec.t0;
  const double tau_limit = spec.nu * spec.t_max;

  if (const auto* fam = std::get_if<Family>(&spec.envelope)) {
    p.stokes_ = builtin_stokes(*fam);
  } else {
    const auto& expr = std::get<DslExpression>(spec.envelope);
    if (!expr.ast) throw ValidationError("envelope expression missing");
    const double nu = spec.nu;
    auto ast = expr.ast;
    p.stokes_ = [ast, nu](double tau) {
      return dsl::eval(*ast, tau / nu, nu) / nu;
    };
  }

  if (const auto* eta = std::get_if<double>(&spec.eta)) {
    if (*eta == 0.0) throw ValidationError("eta must be nonzero");
    p.eta_mode_ = (*eta != 1.0);
  } else {
    const auto& expr = std::get<DslExpression>(spec.eta);
    if (!expr.ast) throw ValidationError("eta expression missing");
    p.eta_mode_ = true;
  }

  // Probe for negative Stokes values: allowed, but theta monotonicity and
  // complete transfer are no longer guaranteed.
  for (int k = 0; k <= 256; ++k) {
    const double tau =
        p.tau0_ + (tau_limit - p.tau0_) * (k / 256.0);
    try {
      if (p.stokes_(tau) < -1e-15) {
        p.negative_stokes_ = true;
        break;
      }
    } catch (const NumericalError&) {
      break;  // envelope domain ends before tau_limit; capping decides
    }
  }

  // Eta must not cross zero anywhere in the window.
  if (p.eta_mode_ && !p.eta_is_constant()) {
    for (int k = 0; k <= 256; ++k) {
      const double tau = p.tau0_ + (tau_limit - p.tau0_) * (k / 256.0);
      try {
        if (std::fabs(p.eta(tau)) < 1e-9)
          throw ValidationError("eta(t) crosses zero inside the window");
      } catch (const NumericalError&) {
        break;
      }
    }
  }

  // Locate the end of the usable domain: theta may hit the cap before
  // tau_limit (sec-type pumps diverge there).
  p.tau_end_ = tau_limit;
  if (tau_limit > p.tau0_) {
    const double cap = spec.theta_cap;
    auto rhs = [&p](double tau, const ode::Vec<1>& /*y*/) {
      ode::Vec<1> dy;
      dy[0] = 0.5 * p.stokes_(tau);
      return dy;
    };
    ode::Options opt{1e-12, 1e-14, 0.0};
    double crossing = -1.0;
    ode::Vec<1> y0;
    y0[0] = 0.0;
    ode::integrate<1>(rhs, p.tau0_, y0, tau_limit, opt,
                      [&](const ode::Step<1>& s) {
                        if (s.y1[0] >= cap) {
                          crossing = ode::locate_zero(
                              s,
                              [&](double, const ode::Vec<1>& y) {
                                return y[0] - cap;
                              },
                              1e-13);
                          return ode::Control::Stop;
                        }
                        return ode::Control::Continue;
                      });
    if (crossing >= 0.0) {
      p.capped_ = true;
      p.cap_time_ = crossing;
      // Shade the end slightly inside the cap so every grid point keeps
      // theta strictly below theta_cap.
      p.tau_end_ = crossing - 1e-10 * (tau_limit - p.tau0_);
    }
  }
  return p;
}

double Protocol::stokes(double tau) const { return stokes_(tau); }

double Protocol::theta(double tau) const {
  const double slack = 1e-9 * std::max(1.0, std::fabs(tau_end_));
  if (tau < tau0_ - slack || tau > tau_end_ + slack)
    throw ValidationError("time " + std::to_string(tau) +
                          " outside the protocol domain");
  tau = std::clamp(tau, tau0_, tau_end_);
  return adaptive_simpson([this](double u) { return 0.5 * stokes_(u); },
                          tau0_, tau, 1e-12);
}

bool Protocol::eta_is_constant() const {
  return std::holds_alternative<double>(spec_.eta);
}

double Protocol::eta(double tau) const {
  if (const auto* v = std::get_if<double>(&spec_.eta)) return *v;
  const auto& expr = std::get<DslExpression>(spec_.eta);
  return dsl::eval(*expr.ast, tau / spec_.nu, spec_.nu);
}

double Protocol::eta_rate(double tau) const {
  if (eta_is_constant()) return 0.0;
  // Central difference with one Richardson extrapolation, step 1e-6.
  const double h = 1e-6;
  const double d1 = (eta(tau + h) - eta(tau - h)) / (2.0 * h);
  const double d2 = (eta(tau + 2.0 * h) - eta(tau - 2.0 * h)) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

Pulses Protocol::matched_pulses(double tau, double theta) const {
  if (theta >= spec_.theta_cap)
    throw SingularityError("mixing angle " + std::to_string(theta) +
                           " at or beyond theta_cap; sec(theta) singular");
  const double f = stokes_(tau);
  return {0.5 * f / std::cos(theta), f};
}

Pulses Protocol::applied_pulses(double tau, double theta) const {
  if (!eta_mode_) return matched_pulses(tau, theta);
  if (theta >= spec_.theta_cap)
    throw SingularityError("mixing angle " + std::to_string(theta) +
                           " at or beyond theta_cap; tan(theta) singular");
  return stirsap::eta_pulse_pair(stokes_(tau), theta, eta(tau),
                                 eta_rate(tau));
}

Pulses Protocol::applied_pulses(double tau) const {
  return applied_pulses(tau, theta(tau));
}

ThetaResult theta_of_t(const Protocol& p, double tau) {
  const double raw =
      adaptive_simpson([&p](double u) { return 0.5 * p.stokes(u); }, p.tau0(),
                       tau, 1e-12);
  if (raw > p.theta_cap()) return {p.theta_cap(), true};
  return {raw, false};
}

double pump_from_stokes(const Protocol& p, double tau) {
  return p.matched_pulses(tau, p.theta(tau)).omega_p;
}

std::vector<double> sample_theta(const Protocol& p,
                                 const std::vector<double>& grid) {
  std::vector<double> theta(grid.size());
  if (grid.empty()) return theta;
  std::size_t next = 0;
  while (next < grid.size() && grid[next] <= p.tau0()) theta[next++] = 0.0;

  auto rhs = [&p](double tau, const ode::Vec<1>&) {
    ode::Vec<1> dy;
    dy[0] = 0.5 * p.stokes(tau);
    return dy;
  };
  ode::Vec<1> y0;
  y0[0] = 0.0;
  ode::Options opt{1e-12, 1e-14, 0.0};
  ode::integrate<1>(rhs, p.tau0(), y0, grid.back(), opt,
                    [&](const ode::Step<1>& s) {
                      while (next < grid.size() && grid[next] <= s.t1) {
                        theta[next] = s.at(grid[next])[0];
                        ++next;
                      }
                      return next >= grid.size() ? ode::Control::Stop
                                                 : ode::Control::Continue;
                    });
  return theta;
}

SampledSchedule sample_schedule(const Protocol& p) {
  SampledSchedule out;
  out.capped = p.capped();
  out.cap_time = p.cap_time();
  const int n = p.spec().samples;
  out.tau.resize(n);
  const double span = p.tau_end() - p.tau0();
  for (int i = 0; i < n; ++i)
    out.tau[i] = (n == 1) ? p.tau0()
                          : p.tau0() + span * (static_cast<double>(i) / (n - 1));
  out.theta = sample_theta(p, out.tau);
  out.omega_p.resize(n);
  out.omega_s.resize(n);
  for (int i = 0; i < n; ++i) {
    const Pulses pl = p.applied_pulses(out.tau[i], out.theta[i]);
    out.omega_p[i] = pl.omega_p;
    out.omega_s[i] = pl.omega_s;
  }
  return out;
}

}  // namespace raman
