#include "cgc/error.hpp"

namespace cgc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::InvalidMesh: return "INVALID_MESH";
    case ErrorCode::NotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::DegenerateTriangle: return "DEGENERATE_TRIANGLE";
    case ErrorCode::ReconstructionFailure: return "RECONSTRUCTION_FAILURE";
    case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::PositivityLoss: return "POSITIVITY_LOSS";
    case ErrorCode::KOutOfRange: return "K_OUT_OF_RANGE";
    case ErrorCode::FocalPoint: return "FOCAL_POINT";
    case ErrorCode::SingularOperator: return "SINGULAR_OPERATOR";
    case ErrorCode::InsufficientGrid: return "INSUFFICIENT_GRID";
    case ErrorCode::MismatchedMesh: return "MISMATCHED_MESH";
    case ErrorCode::RankDeficient: return "RANK_DEFICIENT";
    case ErrorCode::Io: return "IO_ERROR";
    case ErrorCode::Usage: return "USAGE";
  }
  return "UNKNOWN";
}

void require_k_in_range(double k) {
  if (!(k > -1.0 && k < 0.0)) throw Error(ErrorCode::KOutOfRange, "k must lie in (-1, 0), got " + std::to_string(k));
}

}  // namespace cgc
