// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "procrt/math.hpp"

namespace procrt {

/// Both directions of an instance placement. They are stored explicitly so
/// traversal never inverts a matrix per ray.
struct InstanceTransform {
  Mat4 local_to_world = Mat4::identity();
  Mat4 world_to_local = Mat4::identity();

  /// Computes the inverse; throws ValidationFailure when the matrix is singular.
  static InstanceTransform from_local_to_world(const Mat4& local_to_world);

  /// True when local_to_world * world_to_local is the identity within tol per element.
  bool consistent(double tol = 1e-5) const;

  friend bool operator==(const InstanceTransform&, const InstanceTransform&) = default;
};

}  // namespace procrt
