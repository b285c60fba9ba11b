#include "her2/error.hpp"

namespace her2 {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kIncompleteGrid: return "incomplete-grid";
    case ErrorKind::kMappingOutOfRange: return "mapping-out-of-range";
    case ErrorKind::kNotInvertible: return "not-invertible";
    case ErrorKind::kBackendUnavailable: return "backend-unavailable";
    case ErrorKind::kProtocolViolation: return "protocol-violation";
    case ErrorKind::kUndefinedRoc: return "undefined-roc";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace her2
