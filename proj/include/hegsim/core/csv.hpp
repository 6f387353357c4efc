#pragma once

#include <cstdio>
#include <string>

namespace hegsim {

/// Quotes a CSV field only when it needs it (comma, quote, or newline).
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Shortest round-trip decimal form, locale-independent ("%.17g" would be
/// exact but noisy; ten significant digits cover every value the reports
/// carry and keep golden files readable).
inline std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace hegsim
