#ifndef RAMANPASS_ANALYSIS_HPP
#define RAMANPASS_ANALYSIS_HPP

#include <string>
#include <vector>

#include "ramanpass/dynamics.hpp"
#include "ramanpass/schedule.hpp"

// Transfer-quality analysis: sensitivity to hard pulse truncation,
// effective passage durations, and intermediate-level occupancy of the
// eta-scaled protocols.
namespace raman {

struct TruncationReport {
  double t_fc;             // cutoff time (dimensionless)
  double delta;            // arctan(omega_s / omega_p) at the cutoff
  double predicted_p3;     // (1 - tan^2(delta)/4)^2
  double simulated_p3;     // frozen-pulse evolution result
  double stirap_baseline;  // cos^2(delta), the adiabatic comparison
};

// Truncates the pulses abruptly at tau_fc: evolves to the cutoff, then
// holds H = 0 so the populations freeze, and compares the frozen P3 with
// the closed-form prediction from the pulse deviation angle.
TruncationReport truncation_population(const Protocol& p, double tau_fc);

// First dimensionless time where P3 >= threshold, located by bisection on
// the integrator's dense output to |tau| tolerance 1e-10. Throws
// ThresholdError if the protocol never gets there.
double effective_duration(const Protocol& p, double threshold);

// Time where the mixing angle reaches theta_star (bisection on theta's
// quadrature; requires a non-negative envelope so theta is monotone).
double time_at_theta(const Protocol& p, double theta_star);

struct OccupancyReport {
  double eta;
  std::vector<double> theta;     // grid on [0, pi/2]
  std::vector<double> p2;        // sin^2 cos^2
  std::vector<double> p2_prime;  // cos^2 / (eta^2 + cot^2)
  std::vector<double> ratio;     // 1 / (eta^2 sin^2 + cos^2)
  double ratio_at_pi4;           // 2 / (1 + eta^2)
  double analytic_max_p2_prime;  // 1 / (1 + |eta|)^2
  double theta_at_max;           // arcsin(1 / sqrt(1 + |eta|))
  double simulated_max_p2;       // max |c2|^2 along the eta protocol
};

OccupancyReport occupancy_report(const ProtocolSpec& base, EtaSource eta,
                                 int grid);

struct FamilySummary {
  Family family;
  std::string stokes_expr;
  std::string pump_expr;
  std::string population_law;
  std::string stokes0_expr;  // reference Stokes of the reconstruction
  std::string pump0_expr;    // reference pump of the reconstruction
  double tfc_simulated;
  double tfc_closed_form;
  double deviation;  // simulated - closed form
};

// Closed-form effective duration from the family's population law.
double closed_form_duration(Family id, double threshold);

// Table-I-style expressions per family, DSL-parseable (nu and t variables).
std::string family_stokes_expr(Family id);
std::string family_pump_expr(Family id);
std::string family_population_law(Family id);
std::string family_stokes0_expr(Family id);
std::string family_pump0_expr(Family id);

// One row per family a-f: simulated and closed-form durations side by side
// plus the defining expressions.
std::vector<FamilySummary> table1_report(double nu, double threshold);

}  // namespace raman

#endif  // RAMANPASS_ANALYSIS_HPP
