#include "hegsim/core/jsonutil.hpp"

namespace hegsim::jsonutil {

Error schema_error(const std::string& path, const std::string& what) {
  return Error{ErrorCode::SchemaViolation, path + ": " + what};
}

Result<const Json*> require(const Json& j, const std::string& key,
                            const std::string& path) {
  if (!j.is_object()) return schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) return schema_error(path + "/" + key, "missing");
  return &*it;
}

namespace {

template <class T, class Pred, class Get>
Result<T> require_typed(const Json& j, const std::string& key,
                        const std::string& path, Pred pred, Get get,
                        const char* type_name) {
  auto field = require(j, key, path);
  if (!field.ok()) return field.error();
  const Json& v = *field.value();
  if (!pred(v)) return schema_error(path + "/" + key, type_name);
  return get(v);
}

}  // namespace

Result<std::uint64_t> require_u64(const Json& j, const std::string& key,
                                  const std::string& path) {
  return require_typed<std::uint64_t>(
      j, key, path,
      [](const Json& v) {
        return v.is_number_unsigned() ||
               (v.is_number_integer() && v.get<std::int64_t>() >= 0);
      },
      [](const Json& v) { return v.get<std::uint64_t>(); },
      "expected a non-negative integer");
}

Result<std::int64_t> require_i64(const Json& j, const std::string& key,
                                 const std::string& path) {
  return require_typed<std::int64_t>(
      j, key, path, [](const Json& v) { return v.is_number_integer(); },
      [](const Json& v) { return v.get<std::int64_t>(); },
      "expected an integer");
}

Result<double> require_number(const Json& j, const std::string& key,
                              const std::string& path) {
  return require_typed<double>(
      j, key, path, [](const Json& v) { return v.is_number(); },
      [](const Json& v) { return v.get<double>(); }, "expected a number");
}

Result<std::string> require_string(const Json& j, const std::string& key,
                                   const std::string& path) {
  return require_typed<std::string>(
      j, key, path, [](const Json& v) { return v.is_string(); },
      [](const Json& v) { return v.get<std::string>(); }, "expected a string");
}

Result<bool> require_bool(const Json& j, const std::string& key,
                          const std::string& path) {
  return require_typed<bool>(
      j, key, path, [](const Json& v) { return v.is_boolean(); },
      [](const Json& v) { return v.get<bool>(); }, "expected a boolean");
}

Result<const Json*> require_object(const Json& j, const std::string& key,
                                   const std::string& path) {
  auto field = require(j, key, path);
  if (!field.ok()) return field.error();
  if (!field.value()->is_object()) {
    return schema_error(path + "/" + key, "expected an object");
  }
  return field;
}

Result<const Json*> require_array(const Json& j, const std::string& key,
                                  const std::string& path) {
  auto field = require(j, key, path);
  if (!field.ok()) return field.error();
  if (!field.value()->is_array()) {
    return schema_error(path + "/" + key, "expected an array");
  }
  return field;
}

namespace {

template <class T, class Req>
Result<T> opt_typed(const Json& j, const std::string& key, T fallback,
                    const std::string& path, Req req) {
  if (!j.is_object()) return schema_error(path, "expected an object");
  if (j.find(key) == j.end()) return fallback;
  return req(j, key, path);
}

}  // namespace

Result<std::uint64_t> opt_u64(const Json& j, const std::string& key,
                              std::uint64_t fallback, const std::string& path) {
  return opt_typed(j, key, fallback, path, require_u64);
}

Result<std::int64_t> opt_i64(const Json& j, const std::string& key,
                             std::int64_t fallback, const std::string& path) {
  return opt_typed(j, key, fallback, path, require_i64);
}

Result<double> opt_number(const Json& j, const std::string& key, double fallback,
                          const std::string& path) {
  return opt_typed(j, key, fallback, path, require_number);
}

Result<bool> opt_bool(const Json& j, const std::string& key, bool fallback,
                      const std::string& path) {
  return opt_typed(j, key, fallback, path, require_bool);
}

Result<std::string> opt_string(const Json& j, const std::string& key,
                               std::string fallback, const std::string& path) {
  return opt_typed(j, key, std::move(fallback), path, require_string);
}

Result<Json> parse_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return schema_error("", "not valid JSON");
  }
  return j;
}

}  // namespace hegsim::jsonutil
