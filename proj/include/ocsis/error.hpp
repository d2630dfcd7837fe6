#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocsis {

enum class ErrorCode {
  UnknownParameter,
  InvalidLevel,
  InvalidState,
  InvalidSet,
  StaleTick,
  IllegalTransition,
  UnknownRef,
  HashMismatch,
  VersionUnsupported,
  MissingEntry,
  ParseError,
  DuplicateFailure,
  InvalidInput,
  MalformedFrame,
  UnsupportedVersion,
  UnknownMessageKind,
  BindFailure,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ocsis
