#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <memory>
#include <optional>
#include <variant>

#include "ramanpass/analysis.hpp"
#include "ramanpass/cli_commands.hpp"
#include "ramanpass/dsl.hpp"
#include "ramanpass/dynamics.hpp"
#include "ramanpass/invariant.hpp"
#include "ramanpass/protocol_io.hpp"
#include "ramanpass/schedule.hpp"
#include "ramanpass/stirsap.hpp"

namespace py = pybind11;
using namespace raman;

namespace {

using Complex = std::complex<double>;
using StateTuple = std::array<Complex, 3>;

StateTuple to_tuple(const StateVector& v) {
  return {v[0], v[1], v[2]};
}

StateVector to_state(const StateTuple& t) {
  StateVector v;
  v << t[0], t[1], t[2];
  return v;
}

EtaSource eta_from_object(const py::object& obj) {
  if (py::isinstance<py::str>(obj))
    return DslExpression::parse(obj.cast<std::string>());
  return obj.cast<double>();
}

py::dict trajectory_to_dict(const Trajectory& traj) {
  std::vector<double> tau, theta, p1, p2, p3, residual, fidelity, phase;
  std::vector<Complex> c1, c2, c3;
  for (const TrajectoryRow& row : traj.rows) {
    tau.push_back(row.tau);
    theta.push_back(row.theta);
    p1.push_back(row.populations[0]);
    p2.push_back(row.populations[1]);
    p3.push_back(row.populations[2]);
    residual.push_back(row.invariant_residual);
    fidelity.push_back(row.dressed_fidelity);
    phase.push_back(row.accumulated_phase);
    c1.push_back(row.psi[0]);
    c2.push_back(row.psi[1]);
    c3.push_back(row.psi[2]);
  }
  py::dict d;
  d["tau"] = std::move(tau);
  d["c1"] = std::move(c1);
  d["c2"] = std::move(c2);
  d["c3"] = std::move(c3);
  d["p1"] = std::move(p1);
  d["p2"] = std::move(p2);
  d["p3"] = std::move(p3);
  d["theta"] = std::move(theta);
  d["invariant_residual"] = std::move(residual);
  d["dressed_fidelity"] = std::move(fidelity);
  d["accumulated_phase"] = std::move(phase);
  d["norm_drift"] = traj.norm_drift;
  d["capped"] = traj.capped;
  d["tau_end"] = traj.tau_end;
  return d;
}

void apply_overrides(ProtocolSpec& spec, std::optional<double> t_max,
                     const py::object& eta, std::optional<double> theta_cap,
                     std::optional<double> rtol, std::optional<double> atol,
                     std::optional<int> samples,
                     std::optional<double> threshold) {
  if (t_max) spec.t_max = *t_max;
  if (!eta.is_none()) spec.eta = eta_from_object(eta);
  if (theta_cap) spec.theta_cap = *theta_cap;
  if (rtol) spec.tol.rtol = *rtol;
  if (atol) spec.tol.atol = *atol;
  if (samples) spec.samples = *samples;
  if (threshold) spec.threshold = *threshold;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Simulator and verifier for matched pump/Stokes stimulated-Raman "
      "passages in three-level Lambda systems";

  py::register_exception<ParseError>(m, "ExpressionParseError",
                                     PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<ProtocolSpec>(m, "ProtocolSpec")
      .def_readonly("name", &ProtocolSpec::name)
      .def_readonly("nu", &ProtocolSpec::nu)
      .def_readonly("t0", &ProtocolSpec::t0)
      .def_readonly("t_max", &ProtocolSpec::t_max)
      .def_readonly("theta_cap", &ProtocolSpec::theta_cap)
      .def_readonly("samples", &ProtocolSpec::samples)
      .def_readonly("threshold", &ProtocolSpec::threshold)
      .def("__repr__", [](const ProtocolSpec& s) {
        return "<ProtocolSpec '" + s.name + "'>";
      });

  m.def(
      "builtin_spec",
      [](const std::string& family, double nu, std::optional<double> t_max,
         const py::object& eta, std::optional<double> theta_cap,
         std::optional<double> rtol, std::optional<double> atol,
         std::optional<int> samples, std::optional<double> threshold) {
        if (family.size() != 1)
          throw ValidationError("family expects a single letter a-f");
        ProtocolSpec spec = builtin_family(family_from_char(family[0]), nu);
        apply_overrides(spec, t_max, eta, theta_cap, rtol, atol, samples,
                        threshold);
        return spec;
      },
      py::arg("family"), py::arg("nu") = 1.0, py::arg("t_max") = py::none(),
      py::arg("eta") = py::none(), py::arg("theta_cap") = py::none(),
      py::arg("rtol") = py::none(), py::arg("atol") = py::none(),
      py::arg("samples") = py::none(), py::arg("threshold") = py::none(),
      "Spec for one built-in envelope family with its default window");

  m.def(
      "expression_spec",
      [](const std::string& stokes, double nu, double t0, double t_max,
         const py::object& eta, std::optional<double> theta_cap,
         std::optional<double> rtol, std::optional<double> atol,
         std::optional<int> samples, std::optional<double> threshold,
         const std::string& name) {
        ProtocolSpec spec;
        spec.name = name;
        spec.envelope = DslExpression::parse(stokes);
        spec.nu = nu;
        spec.t0 = t0;
        spec.t_max = t_max;
        apply_overrides(spec, {}, eta, theta_cap, rtol, atol, samples,
                        threshold);
        Protocol::compile(spec);
        return spec;
      },
      py::arg("stokes"), py::arg("nu") = 1.0, py::arg("t0") = 0.0,
      py::arg("t_max") = 1.0, py::arg("eta") = py::none(),
      py::arg("theta_cap") = py::none(), py::arg("rtol") = py::none(),
      py::arg("atol") = py::none(), py::arg("samples") = py::none(),
      py::arg("threshold") = py::none(), py::arg("name") = "expression",
      "Spec from a Stokes envelope expression over t and nu");

  m.def("load_protocol", &load_protocol, py::arg("path"),
        "Parse a protocol file");
  m.def(
      "parse_protocol_text",
      [](const std::string& text) { return parse_protocol_text(text); },
      py::arg("text"));

  m.def(
      "sample_schedule",
      [](const ProtocolSpec& spec) {
        const SampledSchedule s = sample_schedule(Protocol::compile(spec));
        py::dict d;
        d["tau"] = s.tau;
        d["omega_p"] = s.omega_p;
        d["omega_s"] = s.omega_s;
        d["theta"] = s.theta;
        d["capped"] = s.capped;
        return d;
      },
      py::arg("spec"), "Uniform schedule grid with the applied pulses");

  m.def(
      "evolve",
      [](const ProtocolSpec& spec, std::optional<double> tau_end) {
        const Protocol proto = Protocol::compile(spec);
        StateVector psi;
        psi << 1.0, 0.0, 0.0;
        return trajectory_to_dict(evolve(proto, psi, tau_end));
      },
      py::arg("spec"), py::arg("tau_end") = py::none(),
      "Evolve |1> under the protocol; per-row trajectory columns");

  m.def(
      "propagate_reference",
      [](const ProtocolSpec& spec, long steps,
         std::optional<double> tau_end) {
        const Protocol proto = Protocol::compile(spec);
        StateVector psi;
        psi << 1.0, 0.0, 0.0;
        return to_tuple(propagate_reference(
            proto, psi, tau_end.value_or(proto.tau_end()), steps));
      },
      py::arg("spec"), py::arg("steps"), py::arg("tau_end") = py::none(),
      "Fixed-step matrix-exponential reference propagation of |1>");

  m.def(
      "populations",
      [](const StateTuple& state) { return populations(to_state(state)); },
      py::arg("state"));

  m.def(
      "effective_duration",
      [](const ProtocolSpec& spec, std::optional<double> threshold) {
        return effective_duration(Protocol::compile(spec),
                                  threshold.value_or(spec.threshold));
      },
      py::arg("spec"), py::arg("threshold") = py::none(),
      "First dimensionless time where P3 reaches the threshold");

  m.def(
      "truncation_report",
      [](const ProtocolSpec& spec, double tau_fc) {
        const TruncationReport r =
            truncation_population(Protocol::compile(spec), tau_fc);
        py::dict d;
        d["t_fc"] = r.t_fc;
        d["delta"] = r.delta;
        d["predicted_p3"] = r.predicted_p3;
        d["simulated_p3"] = r.simulated_p3;
        d["stirap_baseline"] = r.stirap_baseline;
        return d;
      },
      py::arg("spec"), py::arg("tau_fc"),
      "Hard-truncation transfer loss at the cutoff time");

  m.def(
      "occupancy_report",
      [](const ProtocolSpec& spec, double eta, int grid) {
        const OccupancyReport r = occupancy_report(spec, eta, grid);
        py::dict d;
        d["eta"] = r.eta;
        d["theta"] = r.theta;
        d["p2"] = r.p2;
        d["p2_prime"] = r.p2_prime;
        d["ratio"] = r.ratio;
        d["ratio_at_pi4"] = r.ratio_at_pi4;
        d["analytic_max_p2_prime"] = r.analytic_max_p2_prime;
        d["theta_at_max"] = r.theta_at_max;
        d["simulated_max_p2"] = r.simulated_max_p2;
        return d;
      },
      py::arg("spec"), py::arg("eta"), py::arg("grid") = 401,
      "Intermediate-level occupancy of the eta-scaled protocol");

  m.def(
      "table1_report",
      [](double nu, double threshold) {
        py::list rows;
        for (const FamilySummary& r : table1_report(nu, threshold)) {
          py::dict d;
          d["family"] = std::string(1, family_char(r.family));
          d["stokes"] = r.stokes_expr;
          d["pump"] = r.pump_expr;
          d["population_law"] = r.population_law;
          d["stokes0"] = r.stokes0_expr;
          d["pump0"] = r.pump0_expr;
          d["nu_tfc_simulated"] = r.tfc_simulated;
          d["nu_tfc_closed_form"] = r.tfc_closed_form;
          d["deviation"] = r.deviation;
          rows.append(std::move(d));
        }
        return rows;
      },
      py::arg("nu") = 1.0, py::arg("threshold") = 0.9999,
      "Per-family durations, simulated and closed form side by side");

  m.def(
      "reconstruct",
      [](const ProtocolSpec& spec, double tau) {
        const stirsap::Decomposition dec =
            stirsap::reconstruct_h0(Protocol::compile(spec), tau);
        py::dict d;
        d["omega_p0"] = dec.omega_p0;
        d["omega_s0"] = dec.omega_s0;
        d["h_cd"] = dec.h_cd;
        d["phi"] = dec.phi;
        return d;
      },
      py::arg("spec"), py::arg("tau"),
      "Reference pulses, counterdiabatic strength and rotation angle");

  m.def(
      "verify_protocol",
      [](const ProtocolSpec& spec) {
        const VerifyReport report = verify_protocol(spec);
        py::list checks;
        for (const CheckResult& c : report.checks) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["tolerance"] = c.tolerance;
          d["passed"] = c.passed;
          checks.append(std::move(d));
        }
        py::dict d;
        d["checks"] = std::move(checks);
        d["all_passed"] = report.all_passed;
        d["capped"] = report.capped;
        return d;
      },
      py::arg("spec"), "Consistency-check suite; see the CLI 'verify'");

  m.def(
      "eval_expression",
      [](const std::string& text, double t, double nu) {
        const dsl::ExprPtr e = dsl::parse(text);
        return dsl::eval(*e, t, nu);
      },
      py::arg("text"), py::arg("t"), py::arg("nu") = 1.0,
      "Evaluate an envelope expression at (t, nu)");

  m.def(
      "parse_expression",
      [](const std::string& text) {
        return dsl::to_string(*dsl::parse(text));
      },
      py::arg("text"), "Parse and pretty-print an envelope expression");
}
