#ifndef RAMANPASS_PROTOCOL_IO_HPP
#define RAMANPASS_PROTOCOL_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "ramanpass/schedule.hpp"

// Protocol files are flat key = value documents with JSON-compatible
// values; '#' starts a comment. Required keys: name, nu, t0, t_max and
// exactly one of family / stokes. Optional: eta (number or expression
// string, default 1), theta_cap, rtol, atol, samples, threshold.
// The exact schema is documented in docs/protocol-format.md.
namespace raman {

ProtocolSpec parse_protocol_text(std::string_view text);
ProtocolSpec load_protocol(const std::string& path);

// Spec with every default applied, as echoed into output metadata and
// sweep indexes.
nlohmann::ordered_json spec_to_json(const ProtocolSpec& spec);

}  // namespace raman

#endif  // RAMANPASS_PROTOCOL_IO_HPP
