// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/error.hpp"

namespace procrt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTypeMismatch:
      return "TypeMismatch";
    case ErrorCode::kEmptyCategory:
      return "EmptyCategory";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kNotFound:
      return "NotFound";
    case ErrorCode::kSceneFrozen:
      return "SceneFrozen";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kEmptyScene:
      return "EmptyScene";
    case ErrorCode::kUnknownId:
      return "UnknownId";
    case ErrorCode::kDuplicateRayGen:
      return "DuplicateRayGen";
    case ErrorCode::kLayoutViolation:
      return "LayoutViolation";
    case ErrorCode::kConflictingAssociation:
      return "ConflictingAssociation";
    case ErrorCode::kValidationFailure:
      return "ValidationFailure";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kRecursionLimit:
      return "RecursionLimit";
    case ErrorCode::kShaderFault:
      return "ShaderFault";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

LayoutViolation::LayoutViolation(std::size_t record_index, Expected expected, const std::string& detail)
    : Error(ErrorCode::kLayoutViolation, "record " + std::to_string(record_index) +
                                             " expected (r=" + std::to_string(expected.ray_contribution) +
                                             ", g=" + std::to_string(expected.geometry_contribution) +
                                             ", i=" + std::to_string(expected.instance_contribution) + "): " + detail),
      record_index_(record_index),
      expected_(expected) {}

ShaderFault::ShaderFault(std::uint32_t x, std::uint32_t y, const std::string& detail, std::optional<ErrorCode> cause)
    : Error(ErrorCode::kShaderFault, "pixel (" + std::to_string(x) + ", " + std::to_string(y) + "): " + detail),
      x_(x),
      y_(y),
      cause_(cause) {}

}  // namespace procrt
