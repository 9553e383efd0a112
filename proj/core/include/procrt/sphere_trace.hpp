// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "procrt/error.hpp"
#include "procrt/math.hpp"

namespace procrt {

struct SphereTraceConfig {
  double epsilon = 1e-4;
  int max_steps = 256;
  double step_scale = 1.0;

  /// Throws InvalidArgument unless epsilon > 0, max_steps >= 1 and 0 < step_scale <= 1.
  void validate() const;
};

struct SphereTraceResult {
  bool hit = false;
  double t = 0.0;
  /// Distance estimate at the reported t.
  double distance = 0.0;
  int steps = 0;
  int evaluations = 0;
};

/// Marches origin + t*direction over [t_enter, t_exit]. direction need not be
/// unit length; steps are scaled by 1/|direction| so t stays a ray parameter.
/// A start point inside the surface is never reported.
template <class Sdf>
SphereTraceResult sphere_trace(Sdf&& f, const Vec3& origin, const Vec3& direction, double t_enter, double t_exit,
                               const SphereTraceConfig& config) {
  SphereTraceResult result;
  const double len = length(direction);
  if (!(len > 0.0) || !(t_exit >= t_enter)) return result;
  const double inv_len = 1.0 / len;
  const double eps = config.epsilon;

  double t = t_enter;
  double prev_t = t_enter;
  while (result.steps < config.max_steps && t <= t_exit) {
    const double d = f(origin + direction * t);
    ++result.evaluations;
    ++result.steps;
    if (std::abs(d) <= eps) {
      result.hit = true;
      result.t = t;
      result.distance = d;
      return result;
    }
    if (d < 0.0) {
      if (result.steps == 1) return result;
      // Overshot: bisect between the last outside sample and t.
      double lo = prev_t;
      double hi = t;
      for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double dm = f(origin + direction * mid);
        ++result.evaluations;
        if (std::abs(dm) <= eps) {
          result.hit = true;
          result.t = mid;
          result.distance = dm;
          return result;
        }
        (dm > 0.0 ? lo : hi) = mid;
      }
      return result;
    }
    prev_t = t;
    t += config.step_scale * d * inv_len;
  }
  return result;
}

/// Normalized central-difference gradient with half-width h.
template <class Sdf>
Vec3 central_difference_normal(Sdf&& f, const Vec3& p, double h) {
  const Vec3 g{f(Vec3{p.x + h, p.y, p.z}) - f(Vec3{p.x - h, p.y, p.z}),
               f(Vec3{p.x, p.y + h, p.z}) - f(Vec3{p.x, p.y - h, p.z}),
               f(Vec3{p.x, p.y, p.z + h}) - f(Vec3{p.x, p.y, p.z - h})};
  return normalize(g);
}

/// One-sided variant, used for cross-checking.
template <class Sdf>
Vec3 forward_difference_normal(Sdf&& f, const Vec3& p, double h) {
  const double f0 = f(p);
  const Vec3 g{f(Vec3{p.x + h, p.y, p.z}) - f0, f(Vec3{p.x, p.y + h, p.z}) - f0, f(Vec3{p.x, p.y, p.z + h}) - f0};
  return normalize(g);
}

}  // namespace procrt
