#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace f1 {

enum class ErrorCode {
  // validation
  InvalidEmail,
  InvalidField,
  InvalidGeoPoint,
  InvalidRadius,
  InvalidGrade,
  NoLocation,
  TargetIsOrganization,
  // identity / authorization
  Unauthenticated,
  Forbidden,
  NotOwner,
  NotAParty,
  NotAnOrganization,
  NotAuthorized,
  NotATarget,
  // lookup
  UserNotFound,
  TargetNotFound,
  RequestNotFound,
  EngagementNotFound,
  EventNotFound,
  // state conflicts
  DuplicateEmail,
  IllegalTransition,
  TerminalState,
  AlreadyTerminal,
  AlreadyEngaged,
  AlreadyIssued,
  AlreadyRated,
  AlreadyResolved,
  WrongState,
  NotCompleted,
  LockedOut,
  // wordlist
  TooFewWords,
  MalformedWord,
  // storage
  CorruptStore,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the platform. The code drives the HTTP
/// status mapping; the message is for humans.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A (state, event) pair outside the engagement transition table.
class IllegalTransition : public DomainError {
 public:
  using DomainError::DomainError;
  explicit IllegalTransition(const std::string& message)
      : DomainError(ErrorCode::IllegalTransition, message) {}
};

/// Raised for any event delivered to a Closed or Cancelled engagement.
/// Catchable as IllegalTransition.
class TerminalState : public IllegalTransition {
 public:
  explicit TerminalState(const std::string& message)
      : IllegalTransition(ErrorCode::TerminalState, message) {}
};

class CorruptStore : public DomainError {
 public:
  CorruptStore(std::string file, std::size_t line, const std::string& why)
      : DomainError(ErrorCode::CorruptStore,
                    file + ":" + std::to_string(line) + ": " + why),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw DomainError(code, message);
}

}  // namespace f1
