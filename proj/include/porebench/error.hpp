#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace porebench {

enum class ErrorCode {
  InvalidArgument,
  ShapeTooLarge,
  NonWrappingScale,
  DegenerateSeeds,
  MalformedHeader,
  TruncatedPayload,
  UnsupportedMagic,
  FileError,
  NoVoidSpace,
  NoCrossingPath,
  NoBoundaryVoid,
  DegenerateAxis,
  EmptyWindow,
  NonDividingSubgrid,
  EvenFilter,
  MaskMismatch,
  MapeZeroTarget,
  EmptySamples,
  NonFiniteLoss,
  MalformedSamples,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the Python layer can surface it as a structured object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace porebench
