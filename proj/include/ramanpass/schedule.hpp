#ifndef RAMANPASS_SCHEDULE_HPP
#define RAMANPASS_SCHEDULE_HPP

#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "ramanpass/dsl.hpp"
#include "ramanpass/errors.hpp"

// Matched pump/Stokes pulse schedules. The Stokes envelope is free (one of
// the built-in families a-f or a DSL expression); the pump is slaved to it
// through
//     omega_p(t) = (1/2) omega_s(t) sec(theta(t)),
//     theta(t)   = (1/2) integral of omega_s from t0 to t,
// which drives complete population transfer |1> -> |3> as theta -> pi/2.
//
// All internal arithmetic is dimensionless: times are tau = nu * t and Rabi
// frequencies are in units of nu. The frequency scale nu only enters when a
// ProtocolSpec (declared in physical units) is compiled.
namespace raman {

inline constexpr double kDefaultThetaCap =
    std::numbers::pi / 2 - 5e-3;  // sec(theta) <= ~200

enum class Family { A, B, C, D, E, F };

char family_char(Family f);
Family family_from_char(char c);  // throws ValidationError

// A DSL expression together with its source text; copyable.
struct DslExpression {
  std::string source;
  std::shared_ptr<const dsl::Expr> ast;

  static DslExpression parse(std::string source_text);
};

using EnvelopeSource = std::variant<Family, DslExpression>;
using EtaSource = std::variant<double, DslExpression>;

struct Tolerances {
  double rtol = 3e-11;
  double atol = 1e-13;
};

struct ProtocolSpec {
  std::string name;
  EnvelopeSource envelope = Family::A;
  double nu = 1.0;
  double t0 = 0.0;     // physical units
  double t_max = 0.0;  // physical units
  EtaSource eta = 1.0;
  double theta_cap = kDefaultThetaCap;
  Tolerances tol{};
  int samples = 1001;
  double threshold = 0.9999;
};

// Spec for one built-in family with its default window (t0 = 0):
//   a: omega_s = nu                      window nu*t in [0, 3.2]   (capped)
//   b: omega_s = 2 nu sech(nu t)         window nu*t in [0, 5.8]
//   c: omega_s = 2 nu / sqrt(1-nu^2t^2)  window nu*t in [0, 1.0]   (capped)
//   d: omega_s = nu^2 t                  window nu*t in [0, 2.6]   (capped)
//   e: omega_s = 4 nu^2 t sech(nu^2t^2)  window nu*t in [0, 2.44]
//   f: omega_s = 2 nu exp(nu t)          window nu*t in [0, 1.0]   (capped)
ProtocolSpec builtin_family(Family id, double nu);

struct Pulses {
  double omega_p;
  double omega_s;
};

struct ThetaResult {
  double theta;
  bool clipped;
};

// Validated, executable form of a ProtocolSpec. Immutable and cheap to
// copy; safe to share across threads.
class Protocol {
 public:
  static Protocol compile(const ProtocolSpec& spec);

  const ProtocolSpec& spec() const { return spec_; }
  double tau0() const { return tau0_; }
  double tau_end() const { return tau_end_; }
  double theta_cap() const { return spec_.theta_cap; }
  bool capped() const { return capped_; }
  // Dimensionless time where theta crosses theta_cap (only if capped()).
  double cap_time() const { return cap_time_; }
  bool eta_mode() const { return eta_mode_; }
  bool negative_stokes() const { return negative_stokes_; }

  // Stokes envelope in units of nu; throws EvalDomainError outside the
  // envelope's own domain.
  double stokes(double tau) const;

  // Mixing angle by adaptive quadrature (abs tol 1e-12) from tau0.
  double theta(double tau) const;

  double eta(double tau) const;
  double eta_rate(double tau) const;
  bool eta_is_constant() const;

  // Matched pair (omega_p, omega_s) of the passage; throws
  // SingularityError at theta >= theta_cap.
  Pulses matched_pulses(double tau, double theta) const;

  // The pulses actually driven: matched for eta == 1, the eta-modified
  // pair otherwise.
  Pulses applied_pulses(double tau, double theta) const;
  Pulses applied_pulses(double tau) const;

 private:
  Protocol() = default;

  ProtocolSpec spec_;
  std::function<double(double)> stokes_;
  double tau0_ = 0.0;
  double tau_end_ = 0.0;
  double cap_time_ = 0.0;
  bool capped_ = false;
  bool eta_mode_ = false;
  bool negative_stokes_ = false;
};

// theta(tau) clipped at the cap, flagged when clipping occurred.
ThetaResult theta_of_t(const Protocol& p, double tau);

// Matched pump at tau; theta computed internally.
double pump_from_stokes(const Protocol& p, double tau);

struct SampledSchedule {
  std::vector<double> tau;
  std::vector<double> omega_p;
  std::vector<double> omega_s;
  std::vector<double> theta;
  bool capped = false;
  double cap_time = 0.0;
};

// Uniform grid of spec.samples points over [tau0, tau_end] carrying the
// applied pulses. theta is integrated as an ODE so it matches what an
// evolution sees.
SampledSchedule sample_schedule(const Protocol& p);

// theta along an arbitrary ascending grid inside the domain, by one ODE
// pass with dense-output interpolation.
std::vector<double> sample_theta(const Protocol& p,
                                 const std::vector<double>& grid);

}  // namespace raman

#endif  // RAMANPASS_SCHEDULE_HPP
