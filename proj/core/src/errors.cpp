#include "biham/errors.hpp"

namespace biham {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::ZeroModalCoefficient: return "ZeroModalCoefficient";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::OutsideRealRegime: return "OutsideRealRegime";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace biham
