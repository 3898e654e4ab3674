#pragma once

#include <stdexcept>
#include <string>

namespace efl {

enum class ErrorCode {
  Io = 1,
  Parse = 2,
  Validation = 3,
  InsufficientData = 4,
  NoConvergence = 5,
  Config = 6,
  Join = 7,
  InvalidArgument = 8,
  Internal = 9,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::Io:
    return "io";
  case ErrorCode::Parse:
    return "parse";
  case ErrorCode::Validation:
    return "validation";
  case ErrorCode::InsufficientData:
    return "insufficient-data";
  case ErrorCode::NoConvergence:
    return "no-convergence";
  case ErrorCode::Config:
    return "config";
  case ErrorCode::Join:
    return "join";
  case ErrorCode::InvalidArgument:
    return "invalid-argument";
  case ErrorCode::Internal:
    return "internal";
  }
  return "?";
}

// All library failures are reported as Error carrying a stable code; the C API
// maps the code one-to-one onto efl_status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace efl
