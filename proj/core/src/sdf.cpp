// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/sdf.hpp"

#include <algorithm>
#include <cmath>

namespace procrt {

double sdf_sphere(const Vec3& p, const Vec3& center, double radius) { return length(p - center) - radius; }

double sdf_pacman_mouth(const Vec3& p, double half_angle) {
  const double s = std::sin(half_angle);
  const double c = std::cos(half_angle);
  // Upper plane n1 = (-s, c, 0), lower plane n2 = (-s, -c, 0); inside both is the wedge.
  const double upper = -s * p.x + c * p.y;
  const double lower = -s * p.x - c * p.y;
  return std::max(upper, lower);
}

double sdf_pacman(const Vec3& p, const PacmanParams& params) {
  const Vec3 left{params.eye_offset.x, params.eye_offset.y, params.eye_offset.z};
  const Vec3 right{params.eye_offset.x, params.eye_offset.y, -params.eye_offset.z};
  double d = sdf_sphere(p, Vec3{}, params.body_radius);
  d = csg_union(d, sdf_sphere(p, left, params.eye_radius));
  d = csg_union(d, sdf_sphere(p, right, params.eye_radius));
  if (params.mouth_half_angle > 0.0) d = csg_subtract(d, sdf_pacman_mouth(p, params.mouth_half_angle));
  return d;
}

double sdf_julia(const Vec3& p, const JuliaParams& params) {
  Quaternion z{p.x, p.y, p.z, 0.0};
  double dz = 1.0;  // |z'|
  const double escape2 = params.escape_radius * params.escape_radius;
  double r2 = z.x * z.x + z.y * z.y + z.z * z.z + z.w * z.w;
  for (int i = 0; i < params.max_iterations && r2 <= escape2; ++i) {
    dz *= 2.0 * std::sqrt(r2);
    // z^2 = (x^2 - |v|^2, 2 x v)
    const Quaternion sq{z.x * z.x - z.y * z.y - z.z * z.z - z.w * z.w, 2.0 * z.x * z.y, 2.0 * z.x * z.z,
                        2.0 * z.x * z.w};
    z = Quaternion{sq.x + params.c.x, sq.y + params.c.y, sq.z + params.c.z, sq.w + params.c.w};
    r2 = z.x * z.x + z.y * z.y + z.z * z.z + z.w * z.w;
  }
  const double r = std::sqrt(r2);
  double de = r > 0.0 && dz > 0.0 ? 0.5 * r * std::log(r) / dz : 0.0;
  if (params.cut) de = csg_intersect(de, dot(params.cut->normal, p) - params.cut->offset);
  return de;
}

double sdf_mandelbulb(const Vec3& p, const MandelbulbParams& params) {
  const double n = params.power;
  Vec3 z = p;
  double dr = 1.0;
  for (int i = 0; i < params.iterations; ++i) {
    const double r = length(z);
    if (r > params.bailout) break;
    if (r == 0.0) {
      // 0^n = 0 and d/dz vanishes; only the +p term survives.
      z = p;
      dr = 1.0;
      continue;
    }
    const double theta = std::acos(std::clamp(z.z / r, -1.0, 1.0)) * n;
    const double phi = std::atan2(z.y, z.x) * n;
    const double rn1 = std::pow(r, n - 1.0);
    dr = rn1 * n * dr + 1.0;
    const double zr = rn1 * r;
    z = Vec3{std::sin(theta) * std::cos(phi), std::sin(phi) * std::sin(theta), std::cos(theta)} * zr + p;
  }
  const double r = length(z);
  if (r == 0.0) return 0.0;
  return 0.5 * std::log(r) * r / dr;
}

int MandelbulbAnimation::iterations_at(double time) const {
  if (period <= 0.0 || max_iterations <= min_iterations) return std::max(1, min_iterations);
  double phase = std::fmod(time, period);
  if (phase < 0.0) phase += period;
  const int steps = static_cast<int>(std::floor(phase / period * (max_iterations - min_iterations)));
  return std::max(1, min_iterations + steps);
}

}  // namespace procrt
