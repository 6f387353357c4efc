#include "hegsim/core/result.hpp"

namespace hegsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SerialRegression: return "SerialRegression";
    case ErrorCode::SerialGap: return "SerialGap";
    case ErrorCode::ConflictingWindow: return "ConflictingWindow";
    case ErrorCode::RollbackRejected: return "RollbackRejected";
    case ErrorCode::ApprovalInvalid: return "ApprovalInvalid";
    case ErrorCode::DeviceLockedDown: return "DeviceLockedDown";
    case ErrorCode::RatchetViolation: return "RatchetViolation";
    case ErrorCode::InsufficientSignatures: return "InsufficientSignatures";
    case ErrorCode::WrongTarget: return "WrongTarget";
    case ErrorCode::AlreadyExpired: return "AlreadyExpired";
    case ErrorCode::NonMonotoneExpiry: return "NonMonotoneExpiry";
    case ErrorCode::UnauthorizedIssuer: return "UnauthorizedIssuer";
    case ErrorCode::DeviceMismatch: return "DeviceMismatch";
    case ErrorCode::RenewalDenied: return "RenewalDenied";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::MissingRateForKind: return "MissingRateForKind";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownEventTag: return "UnknownEventTag";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace hegsim
