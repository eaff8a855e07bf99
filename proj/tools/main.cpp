#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ramanpass/cli_commands.hpp"
#include "ramanpass/protocol_io.hpp"
#include "ramanpass/schedule.hpp"
#include "ramanpass/sweep.hpp"

namespace {

// Spec source plus flag overrides shared by simulate/verify/reconstruct.
struct SpecArgs {
  std::string protocol_path;
  std::string family;
  std::optional<double> nu;
  std::optional<std::string> eta;
  std::optional<double> t0;
  std::optional<double> t_max;
  std::optional<double> theta_cap;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<int> samples;
  std::optional<double> threshold;
};

void add_spec_options(CLI::App* cmd, SpecArgs& args) {
  auto* protocol =
      cmd->add_option("--protocol", args.protocol_path, "protocol file path");
  auto* family = cmd->add_option("--family", args.family,
                                 "built-in family a-f with default window");
  protocol->excludes(family);
  cmd->add_option("--nu", args.nu, "frequency scale (> 0)");
  cmd->add_option("--eta", args.eta,
                  "occupancy-suppression factor (number or expression)");
  cmd->add_option("--t0", args.t0, "start time (physical units)");
  cmd->add_option("--t-max", args.t_max, "end time (physical units)");
  cmd->add_option("--theta-cap", args.theta_cap,
                  "mixing-angle cap in radians, in (0, pi/2)");
  cmd->add_option("--rtol", args.rtol, "integrator relative tolerance");
  cmd->add_option("--atol", args.atol, "integrator absolute tolerance");
  cmd->add_option("--samples", args.samples, "output grid size");
  cmd->add_option("--threshold", args.threshold,
                  "transfer-complete population threshold");
}

raman::ProtocolSpec build_spec(const SpecArgs& args) {
  raman::ProtocolSpec spec;
  if (!args.protocol_path.empty()) {
    spec = raman::load_protocol(args.protocol_path);
    if (args.nu) spec.nu = *args.nu;
  } else if (!args.family.empty()) {
    if (args.family.size() != 1)
      throw raman::ValidationError("family expects a single letter a-f");
    spec = raman::builtin_family(raman::family_from_char(args.family[0]),
                                 args.nu.value_or(1.0));
  } else {
    throw raman::ValidationError("give either --protocol or --family");
  }
  if (args.eta) {
    try {
      std::size_t used = 0;
      const double v = std::stod(*args.eta, &used);
      if (used == args.eta->size())
        spec.eta = v;
      else
        spec.eta = raman::DslExpression::parse(*args.eta);
    } catch (const std::invalid_argument&) {
      spec.eta = raman::DslExpression::parse(*args.eta);
    }
  }
  if (args.t0) spec.t0 = *args.t0;
  if (args.t_max) spec.t_max = *args.t_max;
  if (args.theta_cap) spec.theta_cap = *args.theta_cap;
  if (args.rtol) spec.tol.rtol = *args.rtol;
  if (args.atol) spec.tol.atol = *args.atol;
  if (args.samples) spec.samples = *args.samples;
  if (args.threshold) spec.threshold = *args.threshold;
  return spec;
}

std::vector<raman::Family> parse_families(const std::string& csv) {
  std::vector<raman::Family> out;
  for (char c : csv) {
    if (c == ',' || c == ' ') continue;
    out.push_back(raman::family_from_char(c));
  }
  if (out.empty()) throw raman::ValidationError("no families given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matched pump/Stokes Raman passage simulator"};
  app.require_subcommand(1);

  SpecArgs sim_args, verify_args, recon_args;
  std::string sim_out = "simulate.csv";
  std::string recon_out = "reconstruct.csv";

  auto* sim = app.add_subcommand(
      "simulate", "integrate the passage and write a trajectory CSV");
  add_spec_options(sim, sim_args);
  sim->add_option("--out", sim_out, "output CSV path");

  auto* verify = app.add_subcommand(
      "verify", "run the invariant/decomposition consistency suite");
  add_spec_options(verify, verify_args);

  auto* table = app.add_subcommand(
      "table1", "per-family duration table (CSV + JSON)");
  double table_nu = 1.0, table_threshold = 0.9999;
  std::string table_out = "table1";
  table->add_option("--nu", table_nu, "frequency scale");
  table->add_option("--threshold", table_threshold, "population threshold");
  table->add_option("--out", table_out, "output path prefix");

  auto* recon = app.add_subcommand(
      "reconstruct", "emit the reference-pulse reconstruction columns");
  add_spec_options(recon, recon_args);
  recon->add_option("--out", recon_out, "output CSV path");

  auto* sweep = app.add_subcommand(
      "sweep", "cross-product sweep over families and eta factors");
  std::string sweep_families = "abcdef";
  std::vector<double> sweep_etas{1.0};
  std::vector<double> sweep_fractions{1.0};
  std::vector<double> sweep_thresholds{0.9999};
  double sweep_nu = 1.0;
  int sweep_samples = 201;
  int sweep_jobs = 1;
  std::string sweep_out = "sweep";
  sweep->add_option("--families", sweep_families, "letters a-f");
  sweep->add_option("--etas", sweep_etas, "eta values")->delimiter(',');
  sweep->add_option("--fractions", sweep_fractions,
                    "cutoff fractions of the effective duration")
      ->delimiter(',');
  sweep->add_option("--thresholds", sweep_thresholds, "population thresholds")
      ->delimiter(',');
  sweep->add_option("--nu", sweep_nu, "frequency scale");
  sweep->add_option("--samples", sweep_samples, "rows per job CSV");
  sweep->add_option("--jobs", sweep_jobs, "worker threads");
  sweep->add_option("--out", sweep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return raman::run_simulate(build_spec(sim_args), sim_out);
    if (verify->parsed())
      return raman::run_verify(build_spec(verify_args), std::cout);
    if (table->parsed())
      return raman::run_table1(table_nu, table_threshold, table_out);
    if (recon->parsed())
      return raman::run_reconstruct(build_spec(recon_args), recon_out);
    if (sweep->parsed()) {
      raman::SweepGrid grid;
      grid.families = parse_families(sweep_families);
      grid.etas = sweep_etas;
      grid.fractions = sweep_fractions;
      grid.thresholds = sweep_thresholds;
      grid.nu = sweep_nu;
      grid.samples = sweep_samples;
      return raman::run_sweep(grid, sweep_out, sweep_jobs, std::cout);
    }
  } catch (const raman::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const raman::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const raman::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
