#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace hegsim {

/// Every recoverable failure across the library. Scenario runs record these
/// as event outcomes instead of aborting, so the codes double as the wire
/// vocabulary of results.
enum class ErrorCode {
  // signer stream
  SerialRegression,
  SerialGap,
  ConflictingWindow,
  // device updates
  RollbackRejected,
  ApprovalInvalid,
  DeviceLockedDown,
  RatchetViolation,
  // lifetime extensions
  InsufficientSignatures,
  WrongTarget,
  AlreadyExpired,
  NonMonotoneExpiry,
  // licenses
  UnauthorizedIssuer,
  DeviceMismatch,
  RenewalDenied,
  // attestation
  UnknownDevice,
  // oversight
  MissingRateForKind,
  MalformedLog,
  // config / IO
  SchemaViolation,
  UnknownEventTag,
  IoError,
};

std::string_view to_string(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string detail;
};

/// Value-or-error carrier. Deliberately minimal: the library treats errors
/// as data, so there is no exception path to interoperate with.
template <class T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error err) : v_(std::move(err)) {}
  Result(ErrorCode code, std::string detail = {})
      : v_(Error{code, std::move(detail)}) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<T>(v_);
  }
  T& value() {
    assert(ok());
    return std::get<T>(v_);
  }

  const Error& error() const {
    assert(!ok());
    return std::get<Error>(v_);
  }
  ErrorCode code() const { return error().code; }

 private:
  std::variant<T, Error> v_;
};

/// Success-or-error for mutating operations.
class Status {
 public:
  Status() = default;
  Status(Error err) : err_(std::move(err)) {}
  Status(ErrorCode code, std::string detail = {})
      : err_(Error{code, std::move(detail)}) {}

  static Status ok_status() { return Status(); }

  bool ok() const { return !err_.has_value(); }
  explicit operator bool() const { return ok(); }

  const Error& error() const {
    assert(!ok());
    return *err_;
  }
  ErrorCode code() const { return error().code; }

 private:
  std::optional<Error> err_;
};

}  // namespace hegsim
