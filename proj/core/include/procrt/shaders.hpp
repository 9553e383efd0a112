// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

// Host implementations of the sample scene's shaders, plus the camera and
// shading helpers they are built from.

#pragma once

#include <cstdint>

#include "procrt/compat.hpp"
#include "procrt/pipeline.hpp"
#include "procrt/scene.hpp"
#include "procrt/sdf.hpp"
#include "procrt/sphere_trace.hpp"

namespace procrt {

inline constexpr std::uint32_t kRadianceRay = 0;
inline constexpr std::uint32_t kShadowRay = 1;
inline constexpr std::uint32_t kSampleRayTypeCount = 2;

// Register bindings shared by the sample signatures and shaders.
inline constexpr Register kOutputRegister{ViewKind::kUav, 0};
inline constexpr Register kAccelerationStructureRegister{ViewKind::kSrv, 0};
inline constexpr Register kGeometryBuffersRegister{ViewKind::kSrv, 1};
inline constexpr Register kInstanceBufferRegister{ViewKind::kSrv, 3};
inline constexpr Register kSceneConstantsRegister{ViewKind::kCbv, 0};
inline constexpr Register kMaterialRegister{ViewKind::kCbv, 1};
inline constexpr Register kPrimitiveInstanceRegister{ViewKind::kCbv, 2};

struct Camera {
  Vec3 position{0.0, 3.0, -10.0};
  Vec3 look_at{0.0, 1.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vertical_fov_degrees = 45.0;

  /// Throws InvalidArgument for a degenerate frame or fov outside (0, 180).
  void validate() const;
};

/// World to camera space; camera space is left-handed, +z forward.
Mat4 view_matrix(const Camera& camera);
/// Left-handed perspective mapping depth [near, far] to [0, 1].
Mat4 perspective(double vertical_fov_degrees, double aspect, double near_plane, double far_plane);
/// Inverse of perspective * view. Throws InvalidArgument when singular.
Mat4 projection_to_world(const Camera& camera, double aspect);

struct CameraRay {
  Vec3 origin;
  Vec3 direction;  // unit length
};

/// Ray through the center of the pixel.
CameraRay primary_ray(const PixelCoord& pixel, const SceneConstantBuffer& constants);

/// Vertical sky gradient, a function of the direction's y only.
Rgba background(const Vec3& direction);

struct PhongTerms {
  Rgba ambient;
  Rgba diffuse;
  Rgba specular;
};

/// All vectors unit length, pointing away from the surface.
PhongTerms phong(const Vec3& normal, const Vec3& to_light, const Vec3& to_eye, const PrimitiveConstantBuffer& material,
                 const Rgba& light_ambient, const Rgba& light_diffuse);
/// ambient + (occluded ? 0 : diffuse + specular), alpha 1.
Rgba combine(const PhongTerms& terms, bool occluded);

struct SampleShaderParams {
  PacmanParams pacman;
  JuliaParams julia;
  MandelbulbParams mandelbulb;
  MandelbulbAnimation animation;
  double epsilon = 1e-5;
  int max_steps = 1024;
  /// World-space offset of shadow-ray origins along the normal.
  double shadow_bias = 2e-3;
  /// Start of shadow rays along their direction.
  double shadow_t_min = 1e-4;
  /// Window of primary rays.
  double primary_t_min = 1e-3;
  double primary_t_max = 1e4;
};

/// Distance estimate of a sample primitive in its local space at the given
/// elapsed time (the time only affects the Mandelbulb).
double evaluate_sdf(PrimitiveType type, const Vec3& p, const SampleShaderParams& params, double time);

struct PrimitiveHit {
  SphereTraceResult trace;
  Vec3 normal;  // local space, unit length; valid when trace.hit
};

/// Sphere traces one primitive over [t_enter, t_exit]. Normals use central
/// differences with h = 2 * epsilon.
PrimitiveHit intersect_primitive(PrimitiveType type, const LocalRay& ray, const SampleShaderParams& params, double time,
                                 double step_scale);

/// Registers Raygen, Miss, Miss_Shadow, ClosestHit_{Triangle,Pacman,Mandelbulb,Julia}
/// and Intersection_{Pacman,Mandelbulb,Julia}.
void register_sample_shaders(ShaderRegistry& registry, const SampleShaderParams& params);

}  // namespace procrt
