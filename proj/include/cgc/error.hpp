#pragma once

#include <stdexcept>
#include <string>

namespace cgc {

enum class ErrorCode {
  CapExceeded,
  InvalidMesh,
  NotPositiveDefinite,
  DegenerateTriangle,
  ReconstructionFailure,
  NonConvergence,
  PositivityLoss,
  KOutOfRange,
  FocalPoint,
  SingularOperator,
  InsufficientGrid,
  MismatchedMesh,
  RankDeficient,
  Io,
  Usage,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Throws KOutOfRange unless k lies strictly inside (-1, 0).
void require_k_in_range(double k);

}  // namespace cgc
