#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfgeo {

enum class ErrorCode {
  InvalidArgument,
  NonConvergence,
  DegenerateGradient,
  ResolutionTooCoarse,
  DriftExceeded,
  Disconnected,
  BVPNonConvergence,
  NotSymmetric,
  NoConvergence,
  EpsilonOutOfRange,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Numerical or usage failure raised by any halfgeo operation. The code
/// identifies the failure class; the message names the failing operation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace halfgeo
