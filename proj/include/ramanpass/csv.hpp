#ifndef RAMANPASS_CSV_HPP
#define RAMANPASS_CSV_HPP

#include <charconv>
#include <string>

namespace raman {

// Shortest round-trip decimal rendering; identical input bits always give
// identical text, which is what the byte-determinism contract rests on.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace raman

#endif  // RAMANPASS_CSV_HPP
