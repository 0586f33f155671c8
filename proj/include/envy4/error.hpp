#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace envy4 {

enum class ErrorKind {
  OutOfRange,
  NotContained,
  QueryInfeasible,
  MalformedAnswer,
  SessionClosed,
  InternalInvariantViolation,
  PreconditionViolated,
  OverlapDetected,
  BadRoster,
  Unauthorized,
  SessionNotFound,
  NotPending,
  AggregateFailure,
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::QueryInfeasible: return "QueryInfeasible";
    case ErrorKind::MalformedAnswer: return "MalformedAnswer";
    case ErrorKind::SessionClosed: return "SessionClosed";
    case ErrorKind::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::OverlapDetected: return "OverlapDetected";
    case ErrorKind::BadRoster: return "BadRoster";
    case ErrorKind::Unauthorized: return "Unauthorized";
    case ErrorKind::SessionNotFound: return "SessionNotFound";
    case ErrorKind::NotPending: return "NotPending";
    case ErrorKind::AggregateFailure: return "AggregateFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (CLI, HTTP layer) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void ensure(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace envy4
