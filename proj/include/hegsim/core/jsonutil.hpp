#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hegsim/core/result.hpp"

namespace hegsim::jsonutil {

using Json = nlohmann::json;

/// Checked field access for config and artifact parsing. Every failure is a
/// SchemaViolation whose detail is "<path>: <what went wrong>", where path
/// is a JSON-pointer-style locator ("/devices/0/initial/serial").

Result<const Json*> require(const Json& j, const std::string& key,
                            const std::string& path);

Result<std::uint64_t> require_u64(const Json& j, const std::string& key,
                                  const std::string& path);
Result<std::int64_t> require_i64(const Json& j, const std::string& key,
                                 const std::string& path);
Result<double> require_number(const Json& j, const std::string& key,
                              const std::string& path);
Result<std::string> require_string(const Json& j, const std::string& key,
                                   const std::string& path);
Result<bool> require_bool(const Json& j, const std::string& key,
                          const std::string& path);
Result<const Json*> require_object(const Json& j, const std::string& key,
                                   const std::string& path);
Result<const Json*> require_array(const Json& j, const std::string& key,
                                  const std::string& path);

/// Optional-with-default readers; absent keys yield the fallback, present
/// keys must still have the right type.
Result<std::uint64_t> opt_u64(const Json& j, const std::string& key,
                              std::uint64_t fallback, const std::string& path);
Result<std::int64_t> opt_i64(const Json& j, const std::string& key,
                             std::int64_t fallback, const std::string& path);
Result<double> opt_number(const Json& j, const std::string& key, double fallback,
                          const std::string& path);
Result<bool> opt_bool(const Json& j, const std::string& key, bool fallback,
                      const std::string& path);
Result<std::string> opt_string(const Json& j, const std::string& key,
                               std::string fallback, const std::string& path);

Error schema_error(const std::string& path, const std::string& what);

/// Parses text into a Json value; syntax errors become SchemaViolation.
Result<Json> parse_text(const std::string& text);

}  // namespace hegsim::jsonutil
