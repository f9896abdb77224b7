#include "lrsd/error.hpp"

namespace lrsd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::geometry_mismatch: return "geometry mismatch";
    case ErrorCode::shape_mismatch: return "shape mismatch";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::configuration: return "configuration error";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::format: return "format error";
    case ErrorCode::numerical_failure: return "numerical failure";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lrsd
