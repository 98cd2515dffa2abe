#include "core/error.hpp"

namespace rmtlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid parameter";
    case ErrorCode::degenerate_input: return "degenerate input";
    case ErrorCode::numerical_failure: return "numerical failure";
    case ErrorCode::range_error: return "range error";
    case ErrorCode::io_error: return "i/o error";
  }
  return "unknown error";
}

}  // namespace rmtlab
