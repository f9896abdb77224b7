#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrsd {

enum class ErrorCode {
  invalid_argument,
  geometry_mismatch,
  shape_mismatch,
  empty_input,
  configuration,
  io,
  format,
  numerical_failure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace lrsd
