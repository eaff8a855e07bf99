#include "ramanpass/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ramanpass/ode.hpp"
#include "ramanpass/stirsap.hpp"

namespace raman {

TruncationReport truncation_population(const Protocol& p, double tau_fc) {
  if (tau_fc <= p.tau0() || tau_fc > p.tau_end())
    throw ValidationError("cutoff time outside the protocol domain");

  TruncationReport report;
  report.t_fc = tau_fc;

  const double theta = p.theta(tau_fc);
  const Pulses pl = p.matched_pulses(tau_fc, theta);
  report.delta = std::atan2(pl.omega_s, pl.omega_p);
  const double tan_delta = pl.omega_s / pl.omega_p;
  const double q = 1.0 - 0.25 * tan_delta * tan_delta;
  report.predicted_p3 = q * q;
  report.stirap_baseline =
      pl.omega_p * pl.omega_p /
      (pl.omega_p * pl.omega_p + pl.omega_s * pl.omega_s);

  // Evolve to the cutoff, then hold both pulses at zero; with H = 0 the
  // populations freeze, so the final P3 is the truncated transfer result.
  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  Trajectory to_cut = evolve(p, psi, tau_fc);
  StateVector frozen = to_cut.rows.back().psi;
  const double hold = std::max(1.0, 0.25 * (tau_fc - p.tau0()));
  auto zero_rhs = [](double, const ode::Vec<6>& y) {
    (void)y;
    return ode::Vec<6>::Zero().eval();
  };
  ode::Vec<6> y0;
  y0 << frozen[0].real(), frozen[0].imag(), frozen[1].real(),
      frozen[1].imag(), frozen[2].real(), frozen[2].imag();
  const ode::Vec<6> y1 = ode::integrate<6>(
      zero_rhs, tau_fc, y0, tau_fc + hold,
      ode::Options{p.spec().tol.rtol, p.spec().tol.atol, 0.0});
  report.simulated_p3 = y1[4] * y1[4] + y1[5] * y1[5];
  return report;
}

double effective_duration(const Protocol& p, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw ValidationError("threshold must lie in (0, 1)");

  using Vec7 = ode::Vec<7>;
  auto rhs = [&p](double tau, const Vec7& y) {
    const Pulses pl = p.applied_pulses(tau, y[6]);
    Vec7 dy;
    dy[0] = pl.omega_p * y[3];
    dy[1] = -pl.omega_p * y[2];
    dy[2] = pl.omega_p * y[1] + pl.omega_s * y[5];
    dy[3] = -(pl.omega_p * y[0] + pl.omega_s * y[4]);
    dy[4] = pl.omega_s * y[3];
    dy[5] = -pl.omega_s * y[2];
    dy[6] = 0.5 * p.stokes(tau);
    return dy;
  };
  auto p3_of = [](const Vec7& y) { return y[4] * y[4] + y[5] * y[5]; };

  Vec7 y0 = Vec7::Zero();
  y0[0] = 1.0;
  double crossing = -1.0;
  ode::integrate<7>(
      rhs, p.tau0(), y0, p.tau_end(),
      ode::Options{p.spec().tol.rtol, p.spec().tol.atol, 0.0},
      [&](const ode::Step<7>& s) {
        if (p3_of(s.y1) >= threshold) {
          crossing = ode::locate_zero(
              s,
              [&](double, const Vec7& y) { return p3_of(y) - threshold; },
              1e-10);
          return ode::Control::Stop;
        }
        return ode::Control::Continue;
      });
  if (crossing < 0.0)
    throw ThresholdError("population threshold " + std::to_string(threshold) +
                         " not reached within the protocol domain");
  return crossing;
}

double time_at_theta(const Protocol& p, double theta_star) {
  if (p.negative_stokes())
    throw ValidationError(
        "time_at_theta requires a non-negative Stokes envelope");
  double lo = p.tau0();
  double hi = p.tau_end();
  if (theta_star <= 0.0) return lo;
  if (p.theta(hi) < theta_star)
    throw ValidationError("theta never reaches the requested value");
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (p.theta(mid) < theta_star ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OccupancyReport occupancy_report(const ProtocolSpec& base, EtaSource eta,
                                 int grid) {
  if (grid < 2) throw ValidationError("occupancy grid needs >= 2 points");

  const stirsap::EtaProtocol ep(base, eta);
  const Protocol& proto = ep.protocol();
  const double eta_abs =
      proto.eta_is_constant() ? std::fabs(proto.eta(proto.tau0())) : 0.0;
  if (!proto.eta_is_constant())
    throw ValidationError(
        "occupancy_report requires a constant eta (analytic columns)");

  OccupancyReport report;
  report.eta = proto.eta(proto.tau0());
  const double eta2 = report.eta * report.eta;
  report.theta.resize(grid);
  report.p2.resize(grid);
  report.p2_prime.resize(grid);
  report.ratio.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double theta =
        (std::numbers::pi / 2) * (static_cast<double>(i) / (grid - 1));
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    report.theta[i] = theta;
    report.p2[i] = s * s * c * c;
    const double cot = (s == 0.0) ? std::numeric_limits<double>::infinity()
                                  : c / s;
    report.p2_prime[i] = c * c / (eta2 + cot * cot);
    report.ratio[i] = 1.0 / (eta2 * s * s + c * c);
  }
  report.ratio_at_pi4 = 2.0 / (1.0 + eta2);
  report.analytic_max_p2_prime = 1.0 / ((1.0 + eta_abs) * (1.0 + eta_abs));
  report.theta_at_max = std::asin(1.0 / std::sqrt(1.0 + eta_abs));

  // Simulated check: maximum |c2|^2 along the eta protocol, refined by a
  // parabola through the top grid row and its neighbours.
  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  const Trajectory traj = evolve(proto, psi);
  double best = 0.0;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < traj.rows.size(); ++i) {
    if (traj.rows[i].populations[1] > best) {
      best = traj.rows[i].populations[1];
      best_idx = i;
    }
  }
  if (best_idx > 0 && best_idx + 1 < traj.rows.size()) {
    const double ym = traj.rows[best_idx - 1].populations[1];
    const double yc = traj.rows[best_idx].populations[1];
    const double yp = traj.rows[best_idx + 1].populations[1];
    const double denom = ym - 2.0 * yc + yp;
    if (denom < 0.0) {
      const double shift = 0.5 * (ym - yp) / denom;
      best = yc - 0.25 * (ym - yp) * shift;
    }
  }
  report.simulated_max_p2 = best;
  return report;
}

namespace {

// Mixing angle at which the family's population law sin^4(theta) (or its
// reparametrized equivalents) reaches the threshold.
double theta_for_threshold(double threshold) {
  return std::asin(std::pow(threshold, 0.25));
}

}  // namespace

double closed_form_duration(Family id, double threshold) {
  const double q = std::pow(threshold, 0.25);
  const double theta_c = theta_for_threshold(threshold);
  switch (id) {
    case Family::A:
      return 2.0 * theta_c;
    case Family::B:
      return std::atanh(q);
    case Family::C:
      return q;
    case Family::D:
      return 2.0 * std::sqrt(theta_c);
    case Family::E:
      return std::sqrt(std::atanh(q));
    case Family::F:
      return std::log1p(theta_c);
  }
  throw ValidationError("unknown family");
}

std::string family_stokes_expr(Family id) {
  switch (id) {
    case Family::A:
      return "nu";
    case Family::B:
      return "2*nu*sech(nu*t)";
    case Family::C:
      return "2*nu/sqrt(1-nu^2*t^2)";
    case Family::D:
      return "nu^2*t";
    case Family::E:
      return "4*nu^2*t*sech(nu^2*t^2)";
    case Family::F:
      return "2*nu*exp(nu*t)";
  }
  return {};
}

std::string family_pump_expr(Family id) {
  switch (id) {
    case Family::A:
      return "nu/2*sec(nu*t/2)";
    case Family::B:
      return "nu";
    case Family::C:
      return "nu/(1-nu^2*t^2)";
    case Family::D:
      return "nu^2*t/2*sec(nu^2*t^2/4)";
    case Family::E:
      return "2*nu^2*t";
    case Family::F:
      return "nu*exp(nu*t)*sec(exp(nu*t)-1)";
  }
  return {};
}

std::string family_population_law(Family id) {
  switch (id) {
    case Family::A:
      return "sin(nu*t/2)^4";
    case Family::B:
      return "tanh(nu*t)^4";
    case Family::C:
      return "nu^4*t^4";
    case Family::D:
      return "sin(nu^2*t^2/4)^4";
    case Family::E:
      return "tanh(nu^2*t^2)^4";
    case Family::F:
      return "sin(exp(nu*t)-1)^4";
  }
  return {};
}

std::string family_stokes0_expr(Family id) {
  switch (id) {
    case Family::A:
      return "nu/2";
    case Family::B:
      return "nu*sech(nu*t)";
    case Family::C:
      return "nu/sqrt(1-nu^2*t^2)";
    case Family::D:
      return "nu^2*t/2";
    case Family::E:
      return "2*nu^2*t*sech(nu^2*t^2)";
    case Family::F:
      return "nu*exp(nu*t)";
  }
  return {};
}

std::string family_pump0_expr(Family id) {
  switch (id) {
    case Family::A:
      return "nu/2*tan(nu*t/2)";
    case Family::B:
      return "nu*tanh(nu*t)";
    case Family::C:
      return "nu^2*t/(1-nu^2*t^2)";
    case Family::D:
      return "nu^2*t/2*tan(nu^2*t^2/4)";
    case Family::E:
      return "2*nu^2*t*tanh(nu^2*t^2)";
    case Family::F:
      return "nu*exp(nu*t)*tan(exp(nu*t)-1)";
  }
  return {};
}

std::vector<FamilySummary> table1_report(double nu, double threshold) {
  std::vector<FamilySummary> rows;
  rows.reserve(6);
  for (Family id : {Family::A, Family::B, Family::C, Family::D, Family::E,
                    Family::F}) {
    ProtocolSpec spec = builtin_family(id, nu);
    spec.threshold = threshold;
    const Protocol proto = Protocol::compile(spec);
    FamilySummary row;
    row.family = id;
    row.stokes_expr = family_stokes_expr(id);
    row.pump_expr = family_pump_expr(id);
    row.population_law = family_population_law(id);
    row.stokes0_expr = family_stokes0_expr(id);
    row.pump0_expr = family_pump0_expr(id);
    row.tfc_simulated = effective_duration(proto, threshold);
    row.tfc_closed_form = closed_form_duration(id, threshold);
    row.deviation = row.tfc_simulated - row.tfc_closed_form;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace raman
