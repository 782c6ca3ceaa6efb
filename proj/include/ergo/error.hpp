#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergo {

enum class ErrorKind {
  NotHermitian,
  NotUnitary,
  TooFarFromUnitary,
  NoConvergence,
  DimMismatch,
  InvalidState,
  EnergyOutOfRange,
  EntropyOutOfRange,
  LengthMismatch,
  ParamOutOfRange,
  ParamInconsistent,
  NegativeBeta,
  InvalidSchedule,
  VerificationFailed,
  GaugeFailure,
  DimTooLarge,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// True for failures of an iterative or numerical procedure, as opposed to
/// rejected inputs.
bool is_convergence_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ergo
