#ifndef RAMANPASS_CLI_COMMANDS_HPP
#define RAMANPASS_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ramanpass/schedule.hpp"

// Implementations behind the CLI subcommands, kept in the library so they
// can be driven from tests and from the python module. Exit codes follow
// the contract 0 = success, 1 = validation/parse failure, 2 = numerical
// failure; main() maps exceptions accordingly.
namespace raman {

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed = true;
  bool capped = false;
};

// Runs the consistency suite appropriate to the protocol: invariant
// equation, component rates, phase, dressed tracking, decomposition and
// norm conservation for matched protocols; dressed-prime tracking, the
// boundary angle and the 1-3 coupling for eta protocols.
VerifyReport verify_protocol(const ProtocolSpec& spec);

// Per-step CSV (schema-pinned header) plus a JSON metadata sidecar at
// out_path + ".meta.json".
int run_simulate(const ProtocolSpec& spec, const std::string& out_path);

struct Trajectory;  // dynamics.hpp

// The simulate CSV body alone, shared with sweep jobs.
void write_trajectory_csv(const Protocol& proto, const Trajectory& traj,
                          const std::string& path);

// Pass/fail table on `out`; returns 0 iff every check passed, else 2.
int run_verify(const ProtocolSpec& spec, std::ostream& out);

// Six-row duration table (CSV + JSON) under out_prefix.
int run_table1(double nu, double threshold, const std::string& out_prefix);

// Reconstruction columns: reference pulses, counterdiabatic strength and
// rotation angle along the schedule.
int run_reconstruct(const ProtocolSpec& spec, const std::string& out_path);

}  // namespace raman

#endif  // RAMANPASS_CLI_COMMANDS_HPP
