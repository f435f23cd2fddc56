#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlim {

enum class ErrorKind {
  NonFinite,
  NotHermitian,
  NotPSD,
  NotUnitary,
  NotSquare,
  BadShape,
  BadConfig,
  BadBinding,
  GaugeResidual,
  SupportMismatch,
  SupportLeak,
  SingularOutcome,
  InvalidState,
  InvariantBroken,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// scans can record a per-field status instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qlim
