#include "qlim/error.hpp"

namespace qlim {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::BadBinding: return "BadBinding";
    case ErrorKind::GaugeResidual: return "GaugeResidual";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::SupportLeak: return "SupportLeak";
    case ErrorKind::SingularOutcome: return "SingularOutcome";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvariantBroken: return "InvariantBroken";
  }
  return "Unknown";
}

}  // namespace qlim
