#include "camid/error.hpp"

namespace camid {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::TooManyLevels: return "TooManyLevels";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegenerateBand: return "DegenerateBand";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::GradientCheckFailed: return "GradientCheckFailed";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::FeatureModelMismatch: return "FeatureModelMismatch";
  }
  return "Unknown";
}

}  // namespace camid
