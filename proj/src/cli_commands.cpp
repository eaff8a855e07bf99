#include "ramanpass/cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "ramanpass/analysis.hpp"
#include "ramanpass/csv.hpp"
#include "ramanpass/dynamics.hpp"
#include "ramanpass/invariant.hpp"
#include "ramanpass/protocol_io.hpp"
#include "ramanpass/stirsap.hpp"

namespace raman {

using nlohmann::ordered_json;

namespace {

constexpr const char* kSimulateHeader =
    "tau,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,p1,p2,p3,theta,omega_p,omega_s,"
    "invariant_residual,e0_fidelity";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  return out;
}

void write_meta(const std::string& csv_path, const ProtocolSpec& spec,
                const Protocol& proto, const Trajectory* traj) {
  ordered_json meta = spec_to_json(spec);
  meta["capped"] = proto.capped();
  if (proto.capped()) meta["cap_time"] = proto.cap_time();
  meta["tau0"] = proto.tau0();
  meta["tau_end"] = proto.tau_end();
  meta["negative_stokes"] = proto.negative_stokes();
  if (traj) {
    meta["norm_drift"] = traj->norm_drift;
    meta["accumulated_phase"] = traj->rows.back().accumulated_phase;
    meta["final_p3"] = traj->rows.back().populations[2];
  }
  std::ofstream out = open_out(csv_path + ".meta.json");
  out << meta.dump(2) << "\n";
}

}  // namespace

void write_trajectory_csv(const Protocol& proto, const Trajectory& traj,
                          const std::string& path) {
  std::ofstream out = open_out(path);
  out << kSimulateHeader << "\n";
  for (const TrajectoryRow& row : traj.rows) {
    const Pulses pl = proto.applied_pulses(row.tau, row.theta);
    out << format_double(row.tau) << ',' << format_double(row.psi[0].real())
        << ',' << format_double(row.psi[0].imag()) << ','
        << format_double(row.psi[1].real()) << ','
        << format_double(row.psi[1].imag()) << ','
        << format_double(row.psi[2].real()) << ','
        << format_double(row.psi[2].imag()) << ','
        << format_double(row.populations[0]) << ','
        << format_double(row.populations[1]) << ','
        << format_double(row.populations[2]) << ','
        << format_double(row.theta) << ',' << format_double(pl.omega_p)
        << ',' << format_double(pl.omega_s) << ','
        << format_double(row.invariant_residual) << ','
        << format_double(row.dressed_fidelity) << "\n";
  }
}

int run_simulate(const ProtocolSpec& spec, const std::string& out_path) {
  const Protocol proto = Protocol::compile(spec);
  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  const Trajectory traj = evolve(proto, psi);
  write_trajectory_csv(proto, traj, out_path);
  write_meta(out_path, spec, proto, &traj);
  return 0;
}

VerifyReport verify_protocol(const ProtocolSpec& spec) {
  const Protocol proto = Protocol::compile(spec);
  VerifyReport report;
  report.capped = proto.capped();

  auto add = [&report](const std::string& name, double value,
                       double tolerance) {
    const bool ok = value <= tolerance;
    report.checks.push_back({name, value, tolerance, ok});
    report.all_passed = report.all_passed && ok;
  };

  StateVector psi;
  psi << 1.0, 0.0, 0.0;
  const Trajectory traj = evolve(proto, psi);
  const FidelityReport fid = fidelity_to_e0(proto, traj);

  double max_norm_dist = 0.0;
  for (double d : fid.norm_distance) max_norm_dist = std::max(max_norm_dist, d);

  if (!proto.eta_mode()) {
    double max_matching = 0.0, max_inv = 0.0, max_comp = 0.0, max_rate = 0.0,
           max_decomp = 0.0, max_spec_dev = 0.0, min_theta_step = 0.0;
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
      const TrajectoryRow& row = traj.rows[i];
      const Pulses pl = proto.matched_pulses(row.tau, row.theta);
      const double matched = 0.5 * pl.omega_s / std::cos(row.theta);
      max_matching =
          std::max(max_matching, std::fabs(pl.omega_p - matched) /
                                     std::max(1.0, std::fabs(matched)));
      max_inv = std::max(max_inv, invariant_residual(pl, row.theta));
      max_comp = std::max(max_comp, component_ode_residual(pl, row.theta));
      max_rate = std::max(max_rate,
                          std::fabs(lr_phase_rate(proto, row.tau, row.theta)));
      max_decomp = std::max(
          max_decomp,
          stirsap::decomposition_residual(pl.omega_p, pl.omega_s, row.theta,
                                          std::numbers::pi / 2 - row.theta,
                                          -0.5 * pl.omega_s));
      const Eigensystem sys = eigensystem_of(invariant_at(row.theta));
      max_spec_dev = std::max(
          {max_spec_dev, std::fabs(sys.values[0]),
           std::fabs(sys.values[1] - 1.0), std::fabs(sys.values[2] + 1.0)});
      if (i > 0 && !proto.negative_stokes())
        min_theta_step = std::min(min_theta_step,
                                  traj.rows[i].theta - traj.rows[i - 1].theta);
    }
    add("matching-condition", max_matching, 1e-10);
    add("invariant-residual", max_inv, 1e-10);
    add("component-ode-residual", max_comp, 1e-10);
    add("lr-phase-rate", max_rate, 1e-10);
    add("lr-phase-accumulated",
        std::fabs(traj.rows.back().accumulated_phase), 1e-8);
    add("dressed-tracking", max_norm_dist, 1e-6);
    add("decomposition-residual", max_decomp, 1e-10);
    add("invariant-spectrum", max_spec_dev, 1e-12);
    add("theta-monotone", -min_theta_step, 0.0);
    add("norm-drift", traj.norm_drift, 1e-9);
  } else {
    double max_13 = 0.0;
    for (const TrajectoryRow& row : traj.rows) {
      const Pulses pl = proto.applied_pulses(row.tau, row.theta);
      const Eigen::Matrix3cd h = hamiltonian_matrix(pl);
      max_13 = std::max(max_13, std::abs(h(0, 2)));
    }
    add("no-13-coupling", max_13, 0.0);
    add("dressed-prime-tracking", max_norm_dist, 1e-6);
    const double eta0 = proto.eta(proto.tau0());
    const double phi0 = stirsap::phi_prime(0.0, eta0);
    add("phi-prime-boundary",
        std::fabs(std::fabs(phi0) - std::numbers::pi / 2), 1e-12);
    add("norm-drift", traj.norm_drift, 1e-9);
    if (proto.eta_is_constant()) {
      const OccupancyReport occ =
          occupancy_report(spec, std::get<double>(spec.eta), 801);
      add("p2-occupancy",
          std::fabs(occ.simulated_max_p2 - occ.analytic_max_p2_prime), 1e-4);
    }
  }
  return report;
}

int run_verify(const ProtocolSpec& spec, std::ostream& out) {
  const VerifyReport report = verify_protocol(spec);
  out << std::left << std::setw(26) << "check" << std::setw(14) << "value"
      << std::setw(14) << "tolerance"
      << "result\n";
  for (const CheckResult& c : report.checks) {
    out << std::left << std::setw(26) << c.name << std::setw(14)
        << format_double(c.value) << std::setw(14)
        << format_double(c.tolerance) << (c.passed ? "PASS" : "FAIL")
        << "\n";
  }
  if (report.capped)
    out << "note: schedule capped at theta_cap before the requested end\n";
  out << (report.all_passed ? "all checks passed\n" : "CHECKS FAILED\n");
  return report.all_passed ? 0 : 2;
}

int run_table1(double nu, double threshold, const std::string& out_prefix) {
  const std::vector<FamilySummary> rows = table1_report(nu, threshold);

  std::ofstream csv = open_out(out_prefix + ".csv");
  csv << "family,stokes,pump,population_law,stokes0,pump0,nu_tfc_simulated,"
         "nu_tfc_closed_form,deviation\n";
  ordered_json jrows = ordered_json::array();
  for (const FamilySummary& row : rows) {
    csv << family_char(row.family) << ',' << row.stokes_expr << ','
        << row.pump_expr << ',' << row.population_law << ','
        << row.stokes0_expr << ',' << row.pump0_expr << ','
        << format_double(row.tfc_simulated) << ','
        << format_double(row.tfc_closed_form) << ','
        << format_double(row.deviation) << "\n";
    ordered_json j;
    j["family"] = std::string(1, family_char(row.family));
    j["stokes"] = row.stokes_expr;
    j["pump"] = row.pump_expr;
    j["population_law"] = row.population_law;
    j["stokes0"] = row.stokes0_expr;
    j["pump0"] = row.pump0_expr;
    j["nu_tfc_simulated"] = row.tfc_simulated;
    j["nu_tfc_closed_form"] = row.tfc_closed_form;
    j["deviation"] = row.deviation;
    jrows.push_back(std::move(j));
  }
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["nu"] = nu;
  doc["threshold"] = threshold;
  doc["rows"] = std::move(jrows);
  std::ofstream js = open_out(out_prefix + ".json");
  js << doc.dump(2) << "\n";
  return 0;
}

int run_reconstruct(const ProtocolSpec& spec, const std::string& out_path) {
  const Protocol proto = Protocol::compile(spec);
  const SampledSchedule sched = sample_schedule(proto);

  std::ofstream out = open_out(out_path);
  out << "tau,omega_p,omega_s,theta,omega_p0,omega_s0,h_cd,phi\n";
  for (std::size_t i = 0; i < sched.tau.size(); ++i) {
    const double theta = sched.theta[i];
    const double f = proto.stokes(sched.tau[i]);
    const double p0 = 0.5 * f * std::tan(theta);
    out << format_double(sched.tau[i]) << ','
        << format_double(sched.omega_p[i]) << ','
        << format_double(sched.omega_s[i]) << ',' << format_double(theta)
        << ',' << format_double(p0) << ',' << format_double(0.5 * f) << ','
        << format_double(0.5 * f) << ','
        << format_double(std::numbers::pi / 2 - theta) << "\n";
  }
  write_meta(out_path, spec, proto, nullptr);
  return 0;
}

}  // namespace raman
