#include "ramanpass/protocol_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace raman {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_line(int line, const std::string& message) {
  throw ValidationError("protocol line " + std::to_string(line) + ": " +
                        message);
}

double require_finite_number(const json& v, const std::string& key,
                             int line) {
  if (!v.is_number())
    fail_line(line, "key '" + key + "' expects a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    fail_line(line, "key '" + key + "' must be finite");
  return d;
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

ProtocolSpec parse_protocol_text(std::string_view text) {
  static const std::set<std::string> known_keys = {
      "name",  "family",    "stokes", "nu",      "t0",        "t_max",
      "eta",   "theta_cap", "rtol",   "atol",    "samples",   "threshold"};

  ProtocolSpec spec;
  std::set<std::string> seen;
  bool have_family = false, have_stokes = false;
  bool have_nu = false, have_t0 = false, have_t_max = false,
       have_name = false;

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_line(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value_text = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(line_no, "empty key");
    if (!known_keys.count(key)) fail_line(line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second)
      fail_line(line_no, "duplicate key '" + key + "'");

    json value;
    try {
      value = json::parse(value_text);
    } catch (const json::exception&) {
      fail_line(line_no, "value for '" + key + "' is not a JSON literal");
    }

    if (key == "name") {
      if (!value.is_string()) fail_line(line_no, "name expects a string");
      spec.name = value.get<std::string>();
      have_name = true;
    } else if (key == "family") {
      if (!value.is_string() || value.get<std::string>().size() != 1)
        fail_line(line_no, "family expects a one-letter string a-f");
      try {
        spec.envelope = family_from_char(value.get<std::string>()[0]);
      } catch (const ValidationError& e) {
        fail_line(line_no, e.what());
      }
      have_family = true;
    } else if (key == "stokes") {
      if (!value.is_string())
        fail_line(line_no, "stokes expects an expression string");
      try {
        spec.envelope = DslExpression::parse(value.get<std::string>());
      } catch (const ParseError& e) {
        fail_line(line_no, std::string("stokes expression: ") + e.what());
      }
      have_stokes = true;
    } else if (key == "eta") {
      if (value.is_number()) {
        spec.eta = require_finite_number(value, key, line_no);
      } else if (value.is_string()) {
        try {
          spec.eta = DslExpression::parse(value.get<std::string>());
        } catch (const ParseError& e) {
          fail_line(line_no, std::string("eta expression: ") + e.what());
        }
      } else {
        fail_line(line_no, "eta expects a number or an expression string");
      }
    } else if (key == "nu") {
      spec.nu = require_finite_number(value, key, line_no);
      have_nu = true;
    } else if (key == "t0") {
      spec.t0 = require_finite_number(value, key, line_no);
      have_t0 = true;
    } else if (key == "t_max") {
      spec.t_max = require_finite_number(value, key, line_no);
      have_t_max = true;
    } else if (key == "theta_cap") {
      spec.theta_cap = require_finite_number(value, key, line_no);
    } else if (key == "rtol") {
      spec.tol.rtol = require_finite_number(value, key, line_no);
    } else if (key == "atol") {
      spec.tol.atol = require_finite_number(value, key, line_no);
    } else if (key == "samples") {
      if (!value.is_number_integer())
        fail_line(line_no, "samples expects an integer");
      spec.samples = value.get<int>();
    } else if (key == "threshold") {
      spec.threshold = require_finite_number(value, key, line_no);
    }
  }

  if (!have_name) throw ValidationError("protocol: missing key 'name'");
  if (!have_nu) throw ValidationError("protocol: missing key 'nu'");
  if (!have_t0) throw ValidationError("protocol: missing key 't0'");
  if (!have_t_max) throw ValidationError("protocol: missing key 't_max'");
  if (have_family == have_stokes)
    throw ValidationError(
        "protocol: declare exactly one of 'family' or 'stokes'");

  // Compile once to surface validation errors (eta = 0, bad cap, ...).
  Protocol::compile(spec);
  return spec;
}

ProtocolSpec load_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open protocol file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_protocol_text(buffer.str());
}

ordered_json spec_to_json(const ProtocolSpec& spec) {
  ordered_json j;
  j["schema_version"] = 1;
  j["name"] = spec.name;
  if (const auto* fam = std::get_if<Family>(&spec.envelope)) {
    j["family"] = std::string(1, family_char(*fam));
  } else {
    j["stokes"] = std::get<DslExpression>(spec.envelope).source;
  }
  j["nu"] = spec.nu;
  j["t0"] = spec.t0;
  j["t_max"] = spec.t_max;
  if (const auto* eta = std::get_if<double>(&spec.eta)) {
    j["eta"] = *eta;
  } else {
    j["eta"] = std::get<DslExpression>(spec.eta).source;
  }
  j["theta_cap"] = spec.theta_cap;
  j["rtol"] = spec.tol.rtol;
  j["atol"] = spec.tol.atol;
  j["samples"] = spec.samples;
  j["threshold"] = spec.threshold;
  return j;
}

}  // namespace raman
