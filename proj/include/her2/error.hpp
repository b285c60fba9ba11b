#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace her2 {

enum class ErrorKind {
  kInvalidArgument,
  kIncompleteGrid,
  kMappingOutOfRange,
  kNotInvertible,
  kBackendUnavailable,
  kProtocolViolation,
  kUndefinedRoc,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure surfaced by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace her2
