#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biham {

enum class ErrorCode {
  InvalidArgument,
  NotDiagonalizable,
  ZeroModalCoefficient,
  StepTooLarge,
  NonFinite,
  OutsideRealRegime,
  InsufficientSnapshots,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the core library. The code is stable and
/// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace biham
