// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/shaders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace procrt {

void Camera::validate() const {
  if (!(vertical_fov_degrees > 0.0 && vertical_fov_degrees < 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "vertical fov must be in (0, 180) degrees");
  }
  const Vec3 forward = look_at - position;
  if (!(length(forward) > 0.0)) throw Error(ErrorCode::kInvalidArgument, "camera position equals look-at point");
  if (!(length(cross(up, forward)) > 1e-12 * length(forward) * length(up))) {
    throw Error(ErrorCode::kInvalidArgument, "camera up vector is parallel to the view direction");
  }
}

Mat4 view_matrix(const Camera& camera) {
  const Vec3 f = normalize(camera.look_at - camera.position);
  const Vec3 r = normalize(cross(camera.up, f));
  const Vec3 u = cross(f, r);
  Mat4 v = Mat4::identity();
  const Vec3 axes[3] = {r, u, f};
  for (int row = 0; row < 3; ++row) {
    v(row, 0) = axes[row].x;
    v(row, 1) = axes[row].y;
    v(row, 2) = axes[row].z;
    v(row, 3) = -dot(axes[row], camera.position);
  }
  return v;
}

Mat4 perspective(double vertical_fov_degrees, double aspect, double near_plane, double far_plane) {
  const double y_scale = 1.0 / std::tan(vertical_fov_degrees * kPi / 360.0);
  Mat4 p;
  p(0, 0) = y_scale / aspect;
  p(1, 1) = y_scale;
  p(2, 2) = far_plane / (far_plane - near_plane);
  p(2, 3) = -near_plane * far_plane / (far_plane - near_plane);
  p(3, 2) = 1.0;
  return p;
}

Mat4 projection_to_world(const Camera& camera, double aspect) {
  camera.validate();
  const auto inv = (perspective(camera.vertical_fov_degrees, aspect, 0.01, 125.0) * view_matrix(camera)).inverse();
  if (!inv) throw Error(ErrorCode::kInvalidArgument, "view-projection matrix is singular");
  return *inv;
}

CameraRay primary_ray(const PixelCoord& pixel, const SceneConstantBuffer& constants) {
  const double sx = (pixel.x + 0.5) / pixel.width * 2.0 - 1.0;
  const double sy = 1.0 - (pixel.y + 0.5) / pixel.height * 2.0;
  const Vec3 world = constants.projection_to_world.transform_projective(Vec3{sx, sy, 0.0});
  return CameraRay{constants.camera_position, normalize(world - constants.camera_position)};
}

Rgba background(const Vec3& direction) {
  const double t = std::clamp(0.5 * (normalize(direction).y + 1.0), 0.0, 1.0);
  const Rgba horizon{0.85f, 0.88f, 0.95f, 1.0f};
  const Rgba zenith{0.25f, 0.45f, 0.85f, 1.0f};
  auto mix = [t](float a, float b) { return static_cast<float>(a + (b - a) * t); };
  return Rgba{mix(horizon.r, zenith.r), mix(horizon.g, zenith.g), mix(horizon.b, zenith.b), 1.0f};
}

namespace {

Rgba modulate(const Rgba& a, const Rgba& b, double s) {
  return Rgba{static_cast<float>(a.r * b.r * s), static_cast<float>(a.g * b.g * s), static_cast<float>(a.b * b.b * s),
              1.0f};
}

}  // namespace

PhongTerms phong(const Vec3& normal, const Vec3& to_light, const Vec3& to_eye, const PrimitiveConstantBuffer& material,
                 const Rgba& light_ambient, const Rgba& light_diffuse) {
  PhongTerms terms;
  terms.ambient = modulate(material.albedo, light_ambient, 1.0);
  const double n_dot_l = std::max(0.0, dot(normal, to_light));
  terms.diffuse = modulate(material.albedo, light_diffuse, material.diffuse_coef * n_dot_l);
  double spec = 0.0;
  if (n_dot_l > 0.0) {
    const Vec3 reflected = normal * (2.0 * dot(normal, to_light)) - to_light;
    spec = std::pow(std::max(0.0, dot(reflected, to_eye)), static_cast<double>(material.specular_power));
  }
  const Rgba white{1.0f, 1.0f, 1.0f, 1.0f};
  terms.specular = modulate(white, light_diffuse, material.specular_coef * spec);
  return terms;
}

Rgba combine(const PhongTerms& terms, bool occluded) {
  const double lit = occluded ? 0.0 : 1.0;
  return Rgba{static_cast<float>(terms.ambient.r + lit * (terms.diffuse.r + terms.specular.r)),
              static_cast<float>(terms.ambient.g + lit * (terms.diffuse.g + terms.specular.g)),
              static_cast<float>(terms.ambient.b + lit * (terms.diffuse.b + terms.specular.b)), 1.0f};
}

double evaluate_sdf(PrimitiveType type, const Vec3& p, const SampleShaderParams& params, double time) {
  switch (type) {
    case PrimitiveType::kPacman:
      return sdf_pacman(p, params.pacman);
    case PrimitiveType::kJuliaSets:
      return sdf_julia(p, params.julia);
    case PrimitiveType::kMandelbulb: {
      MandelbulbParams m = params.mandelbulb;
      m.iterations = params.animation.iterations_at(time);
      return sdf_mandelbulb(p, m);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown primitive type");
}

namespace {

template <class Sdf>
PrimitiveHit trace_with(Sdf&& f, const LocalRay& ray, const SphereTraceConfig& config) {
  PrimitiveHit hit;
  hit.trace = sphere_trace(f, ray.origin, ray.direction, ray.t_enter, ray.t_exit, config);
  if (hit.trace.hit) {
    hit.normal = central_difference_normal(f, ray.origin + ray.direction * hit.trace.t, 2.0 * config.epsilon);
  }
  return hit;
}

}  // namespace

PrimitiveHit intersect_primitive(PrimitiveType type, const LocalRay& ray, const SampleShaderParams& params, double time,
                                 double step_scale) {
  const SphereTraceConfig config{params.epsilon, params.max_steps, step_scale};
  switch (type) {
    case PrimitiveType::kPacman:
      return trace_with([&](const Vec3& p) { return sdf_pacman(p, params.pacman); }, ray, config);
    case PrimitiveType::kJuliaSets:
      return trace_with([&](const Vec3& p) { return sdf_julia(p, params.julia); }, ray, config);
    case PrimitiveType::kMandelbulb: {
      MandelbulbParams m = params.mandelbulb;
      m.iterations = params.animation.iterations_at(time);
      return trace_with([&](const Vec3& p) { return sdf_mandelbulb(p, m); }, ray, config);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown primitive type");
}

namespace {

/// Lights a world-space hit and writes the color into a RayPayload.
void shade(Payload& payload, const RayContext& ctx, Vec3 normal, const PrimitiveConstantBuffer& material,
           const GlobalResources& globals, const Tracer& tracer, const SampleShaderParams& params) {
  RayPayload& out = payload.as<RayPayload>();
  const auto& scene_cb = globals.component<SceneConstantBuffer>(kSceneConstantsRegister);
  const Vec3 p = ctx.world_hit_point();
  const Vec3 to_eye = normalize(-ctx.world_ray.direction);
  if (dot(normal, to_eye) < 0.0) normal = -normal;

  const Vec3 shadow_origin = p + normal * params.shadow_bias;
  Payload shadow(ShadowRayPayload{true});
  TraceContext shadow_ctx;
  shadow_ctx.ray = TraversalRay{shadow_origin, scene_cb.light_position - shadow_origin, params.shadow_t_min, 1.0};
  shadow_ctx.ray_contribution = kShadowRay;
  shadow_ctx.geometry_multiplier = kSampleRayTypeCount;
  shadow_ctx.flags = kRayFlagAcceptFirstHitAndEndSearch;
  tracer.trace(shadow_ctx, shadow);

  const Vec3 to_light = normalize(scene_cb.light_position - p);
  const PhongTerms terms = phong(normal, to_light, to_eye, material, scene_cb.light_ambient, scene_cb.light_diffuse);
  out.color = combine(terms, shadow.as<ShadowRayPayload>().hit);
  out.recursion_depth = tracer.depth();
}

/// Local-space normal of a procedural hit mapped to world space through the
/// instance buffer entry named by the root arguments.
Vec3 procedural_world_normal(const AttributeStruct& attributes, const ProceduralRootArguments& args,
                             const GlobalResources& globals) {
  const Vec3 local(attributes.as<ProceduralPrimitiveAttributes>().normal);
  const auto& instances = globals.component<InstanceBuffer>(kInstanceBufferRegister);
  const InstanceTransform& transform = instances.at(args.instance.instance_index);
  return normalize(transform.world_to_local.transform_normal_transposed(local));
}

}  // namespace

void register_sample_shaders(ShaderRegistry& registry, const SampleShaderParams& params) {
  registry.add_ray_gen("Raygen",
                       [params](const PixelCoord& pixel, const GlobalResources& globals, const Tracer& tracer) {
                         const auto& scene_cb = globals.component<SceneConstantBuffer>(kSceneConstantsRegister);
                         const CameraRay ray = primary_ray(pixel, scene_cb);
                         Payload payload(RayPayload{});
                         TraceContext ctx;
                         ctx.ray = TraversalRay{ray.origin, ray.direction, params.primary_t_min, params.primary_t_max};
                         ctx.ray_contribution = kRadianceRay;
                         ctx.geometry_multiplier = kSampleRayTypeCount;
                         tracer.trace(ctx, payload);
                         return payload.as<RayPayload>().color;
                       });

  registry.add_miss("Miss", [](Payload& payload, const RayContext& ctx) {
    payload.as<RayPayload>().color = background(ctx.world_ray.direction);
  });
  registry.add_miss("Miss_Shadow",
                    [](Payload& payload, const RayContext&) { payload.as<ShadowRayPayload>().hit = false; });

  registry.add_closest_hit(
      "ClosestHit_Triangle", [params](Payload& payload, const AttributeStruct& attributes, const RayContext& ctx,
                                      const RootArguments& root, const GlobalResources& globals, const Tracer& tracer) {
        const auto& args = root.as<TriangleRootArguments>();
        const Float2 bary = attributes.as<TriangleAttributes>().barycentrics;
        const TriangleMesh& mesh = globals.geometry_buffers(kGeometryBuffersRegister).mesh();
        const std::size_t base = std::size_t{ctx.primitive_index} * 3;
        if (base + 2 >= mesh.indices.size()) {
          throw Error(ErrorCode::kOutOfRange, "primitive " + std::to_string(ctx.primitive_index) + " out of range");
        }
        const double u = bary.x;
        const double v = bary.y;
        const Vec3 local = mesh.vertices.at(mesh.indices[base]).normal * (1.0 - u - v) +
                           mesh.vertices.at(mesh.indices[base + 1]).normal * u +
                           mesh.vertices.at(mesh.indices[base + 2]).normal * v;
        const Vec3 world = normalize(ctx.instance->transform.world_to_local.transform_normal_transposed(local));
        shade(payload, ctx, world, args.material, globals, tracer, params);
      });

  const ClosestHitShader procedural_hit = [params](Payload& payload, const AttributeStruct& attributes,
                                                   const RayContext& ctx, const RootArguments& root,
                                                   const GlobalResources& globals, const Tracer& tracer) {
    const auto& args = root.as<ProceduralRootArguments>();
    shade(payload, ctx, procedural_world_normal(attributes, args, globals), args.material, globals, tracer, params);
  };
  registry.add_closest_hit("ClosestHit_Pacman", procedural_hit);
  registry.add_closest_hit("ClosestHit_Mandelbulb", procedural_hit);
  registry.add_closest_hit("ClosestHit_Julia", procedural_hit);

  const IntersectionShader intersect = [params](const LocalRay& ray, const RootArguments& root,
                                                const GlobalResources& globals, HitReporter& reporter) {
    const auto& args = root.as<ProceduralRootArguments>();
    const auto& scene_cb = globals.component<SceneConstantBuffer>(kSceneConstantsRegister);
    const PrimitiveHit hit =
        intersect_primitive(args.instance.primitive_type, ray, params, scene_cb.elapsed_time, args.material.step_scale);
    if (hit.trace.hit) reporter.report(hit.trace.t, ProceduralPrimitiveAttributes{Float3(hit.normal)});
  };
  registry.add_intersection("Intersection_Pacman", intersect);
  registry.add_intersection("Intersection_Mandelbulb", intersect);
  registry.add_intersection("Intersection_Julia", intersect);
}

}  // namespace procrt
