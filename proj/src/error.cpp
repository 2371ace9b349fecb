#include "fsl/error.hpp"

namespace fsl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegreeCap: return "DegreeCap";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NoNormalForm: return "NoNormalForm";
    case ErrorCode::BranchUndefined: return "BranchUndefined";
    case ErrorCode::RayBroken: return "RayBroken";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::PeriodicNotPreperiodic: return "PeriodicNotPreperiodic";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::NotRepelling: return "NotRepelling";
    case ErrorCode::BranchLost: return "BranchLost";
    case ErrorCode::RadiusMismatch: return "RadiusMismatch";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::LinkedConflict: return "LinkedConflict";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fsl
