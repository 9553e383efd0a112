// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

// Signed distance estimators for the sample primitives. All take local-space
// points; negative inside, positive outside.

#pragma once

#include <optional>

#include "procrt/math.hpp"

namespace procrt {

/// Sphere body with two eye spheres, minus a wedge-shaped mouth opening
/// along local +x. The wedge planes contain the z axis.
struct PacmanParams {
  double body_radius = 1.0;
  /// Half opening angle of the mouth in radians; <= 0 closes the mouth.
  double mouth_half_angle = 0.6;
  double eye_radius = 0.14;
  /// Eye centers are (x, y, +z) and (x, y, -z).
  Vec3 eye_offset{0.42, 0.62, 0.5};
};

double sdf_sphere(const Vec3& p, const Vec3& center, double radius);
/// max(a, -b): a with b carved out.
inline double csg_subtract(double a, double b) { return a > -b ? a : -b; }
inline double csg_union(double a, double b) { return a < b ? a : b; }
inline double csg_intersect(double a, double b) { return a > b ? a : b; }

/// Signed distance (lower bound outside the wedge) to the mouth wedge.
double sdf_pacman_mouth(const Vec3& p, double half_angle);
double sdf_pacman(const Vec3& p, const PacmanParams& params);

/// Quaternion with real part x: (x, y, z, w) = x + y i + z j + w k.
struct Quaternion {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;
};

/// Removes every point with dot(normal, p) > offset.
struct CutPlane {
  Vec3 normal{0.0, 0.0, -1.0};
  double offset = 0.0;
};

struct JuliaParams {
  Quaternion c{-0.291, -0.399, 0.339, 0.437};
  int max_iterations = 11;
  double escape_radius = 16.0;
  std::optional<CutPlane> cut;
};

/// Distance estimate |z| ln|z| / (2 |z'|) from the orbit z <- z^2 + c
/// starting at z0 = (p, 0), intersected with the cut half-space when set.
double sdf_julia(const Vec3& p, const JuliaParams& params);

struct MandelbulbParams {
  double power = 8.0;
  int iterations = 8;
  double bailout = 2.0;
};

/// Triplex power-n iteration with running derivative; DE = 0.5 ln(r) r / dr.
double sdf_mandelbulb(const Vec3& p, const MandelbulbParams& params);

/// Iteration count as a step function of time:
/// min + floor((t mod period) / period * (max - min)).
struct MandelbulbAnimation {
  int min_iterations = 2;
  int max_iterations = 12;
  double period = 10.0;

  int iterations_at(double time) const;
};

}  // namespace procrt
