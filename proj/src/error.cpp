#include "sigshape/error.hpp"

namespace sigshape {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AngleAtPi: return "AngleAtPi";
    case ErrorCode::JointCountMismatch: return "JointCountMismatch";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::NotImmersed: return "NotImmersed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonzeroScalarPart: return "NonzeroScalarPart";
    case ErrorCode::BadScalarPart: return "BadScalarPart";
    case ErrorCode::WordTooLong: return "WordTooLong";
    case ErrorCode::TensorTooLarge: return "TensorTooLarge";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::NonAdjacentIntervals: return "NonAdjacentIntervals";
    case ErrorCode::ZeroLogSignature: return "ZeroLogSignature";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::UnknownDof: return "UnknownDof";
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::DofCountMismatch: return "DofCountMismatch";
    case ErrorCode::UnknownJoint: return "UnknownJoint";
    case ErrorCode::NonContiguousFrames: return "NonContiguousFrames";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::DegenerateClass: return "DegenerateClass";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::JointCountMismatch:
    case ErrorCode::TooFewFrames:
    case ErrorCode::NonMonotoneTimes:
    case ErrorCode::MissingSection:
    case ErrorCode::UnknownDof:
    case ErrorCode::DanglingParent:
    case ErrorCode::DofCountMismatch:
    case ErrorCode::UnknownJoint:
    case ErrorCode::NonContiguousFrames:
    case ErrorCode::MalformedInput:
    case ErrorCode::LabelMismatch:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::TooFewPoints:
    case ErrorCode::DegenerateClass:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Error::Error(ErrorCode code, const std::string& what, int line)
    : std::runtime_error(std::string(to_string(code)) + ": line " + std::to_string(line) + ": " + what),
      code_(code),
      line_(line) {}

}  // namespace sigshape
