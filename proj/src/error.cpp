#include "ergo/error.hpp"

namespace ergo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::TooFarFromUnitary: return "TooFarFromUnitary";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::EnergyOutOfRange: return "EnergyOutOfRange";
    case ErrorKind::EntropyOutOfRange: return "EntropyOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::ParamInconsistent: return "ParamInconsistent";
    case ErrorKind::NegativeBeta: return "NegativeBeta";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::GaugeFailure: return "GaugeFailure";
    case ErrorKind::DimTooLarge: return "DimTooLarge";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_convergence_failure(ErrorKind kind) {
  return kind == ErrorKind::NoConvergence || kind == ErrorKind::VerificationFailed ||
         kind == ErrorKind::GaugeFailure;
}

}  // namespace ergo
