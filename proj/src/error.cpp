#include "porebench/error.hpp"

namespace porebench {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeTooLarge: return "ShapeTooLarge";
    case ErrorCode::NonWrappingScale: return "NonWrappingScale";
    case ErrorCode::DegenerateSeeds: return "DegenerateSeeds";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UnsupportedMagic: return "UnsupportedMagic";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::NoVoidSpace: return "NoVoidSpace";
    case ErrorCode::NoCrossingPath: return "NoCrossingPath";
    case ErrorCode::NoBoundaryVoid: return "NoBoundaryVoid";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NonDividingSubgrid: return "NonDividingSubgrid";
    case ErrorCode::EvenFilter: return "EvenFilter";
    case ErrorCode::MaskMismatch: return "MaskMismatch";
    case ErrorCode::MapeZeroTarget: return "MapeZeroTarget";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::MalformedSamples: return "MalformedSamples";
  }
  return "Unknown";
}

}  // namespace porebench
