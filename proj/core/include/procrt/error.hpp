// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace procrt {

enum class ErrorCode {
  kTypeMismatch,
  kEmptyCategory,
  kDuplicateId,
  kNotFound,
  kSceneFrozen,
  kInvalidArgument,
  kEmptyScene,
  kUnknownId,
  kDuplicateRayGen,
  kLayoutViolation,
  kConflictingAssociation,
  kValidationFailure,
  kOutOfRange,
  kRecursionLimit,
  kShaderFault,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every engine error. The code identifies the failure
/// category so callers (and tests) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by shader-table validation. Carries the first record whose
/// contents disagree with the indexing rule and the tuple expected there.
class LayoutViolation : public Error {
 public:
  struct Expected {
    std::uint32_t ray_contribution = 0;
    std::uint32_t geometry_contribution = 0;
    std::uint32_t instance_contribution = 0;
  };

  LayoutViolation(std::size_t record_index, Expected expected, const std::string& detail);

  std::size_t record_index() const noexcept { return record_index_; }
  const Expected& expected() const noexcept { return expected_; }

 private:
  std::size_t record_index_;
  Expected expected_;
};

/// Raised when a shader callback throws during dispatch.
class ShaderFault : public Error {
 public:
  ShaderFault(std::uint32_t x, std::uint32_t y, const std::string& detail,
              std::optional<ErrorCode> cause = std::nullopt);

  std::uint32_t x() const noexcept { return x_; }
  std::uint32_t y() const noexcept { return y_; }
  /// Code of the engine error the shader raised, if it was one.
  std::optional<ErrorCode> cause() const noexcept { return cause_; }

 private:
  std::uint32_t x_;
  std::uint32_t y_;
  std::optional<ErrorCode> cause_;
};

}  // namespace procrt
