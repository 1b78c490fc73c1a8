#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigshape {

enum class ErrorCode {
  // lie / curve
  AngleAtPi,
  JointCountMismatch,
  TooFewFrames,
  NonMonotoneTimes,
  OutOfDomain,
  NonMonotone,
  // srvt / reparam
  NotImmersed,
  DimensionMismatch,
  GridTooCoarse,
  // tensor / signature
  ShapeMismatch,
  NonzeroScalarPart,
  BadScalarPart,
  WordTooLong,
  TensorTooLarge,
  BadInterval,
  NonAdjacentIntervals,
  ZeroLogSignature,
  // mocap
  MissingSection,
  UnknownDof,
  DanglingParent,
  DofCountMismatch,
  UnknownJoint,
  NonContiguousFrames,
  MalformedInput,
  // analysis
  TooFewPoints,
  LabelMismatch,
  DegenerateClass,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Input-data problems (parse failures, inconsistent files) as opposed to
/// numerical failures inside a computation.
bool is_data_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  /// Parse errors carry the 1-based line number they refer to.
  Error(ErrorCode code, const std::string& what, int line);

  ErrorCode code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  int line_ = 0;
};

}  // namespace sigshape
