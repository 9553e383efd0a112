// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "procrt/sdf.hpp"
#include "procrt/shaders.hpp"
#include "procrt/sphere_trace.hpp"
#include "test_util.hpp"

namespace procrt {
namespace {

using testing::hitting_rays;
using testing::Rng;
using testing::SampledHit;
using testing::setup_for;

constexpr std::array<PrimitiveType, 3> kPrimitives = {PrimitiveType::kPacman, PrimitiveType::kJuliaSets,
                                                      PrimitiveType::kMandelbulb};

// ---- Pac-man ----

// Membership by explicit tests on each CSG leaf.
bool pacman_member(const Vec3& p, const PacmanParams& params) {
  const bool body = length(p) < params.body_radius;
  const Vec3 eye{params.eye_offset.x, params.eye_offset.y, params.eye_offset.z};
  const Vec3 other{eye.x, eye.y, -eye.z};
  const bool eyes = length(p - eye) < params.eye_radius || length(p - other) < params.eye_radius;
  const bool in_mouth = params.mouth_half_angle > 0 && std::abs(std::atan2(p.y, p.x)) < params.mouth_half_angle;
  return (body || eyes) && !in_mouth;
}

// Distance to the nearest leaf boundary; used to skip points on creases.
double pacman_boundary_distance(const Vec3& p, const PacmanParams& params) {
  const Vec3 eye{params.eye_offset.x, params.eye_offset.y, params.eye_offset.z};
  const Vec3 other{eye.x, eye.y, -eye.z};
  double d = std::abs(length(p) - params.body_radius);
  d = std::min(d, std::abs(length(p - eye) - params.eye_radius));
  d = std::min(d, std::abs(length(p - other) - params.eye_radius));
  const double s = std::sin(params.mouth_half_angle), c = std::cos(params.mouth_half_angle);
  d = std::min(d, std::abs(-s * p.x + c * p.y));
  d = std::min(d, std::abs(-s * p.x - c * p.y));
  return d;
}

TEST(PacmanTest, CenterOfClosedBody) {
  PacmanParams closed;
  closed.mouth_half_angle = 0.0;
  EXPECT_DOUBLE_EQ(sdf_pacman(Vec3{0, 0, 0}, closed), -closed.body_radius);
  closed.body_radius = 2.5;
  EXPECT_DOUBLE_EQ(sdf_pacman(Vec3{0, 0, 0}, closed), -2.5);
}

TEST(PacmanTest, OutsideAlongMouthBisector) {
  const PacmanParams params;
  EXPECT_GT(sdf_pacman(Vec3{2 * params.body_radius, 0, 0}, params), 0.0);
  // Inside the body radius but inside the mouth too.
  EXPECT_GT(sdf_pacman(Vec3{0.5 * params.body_radius, 0, 0}, params), 0.0);
  // Behind the mouth is solid.
  EXPECT_LT(sdf_pacman(Vec3{-0.5 * params.body_radius, 0, 0}, params), 0.0);
}

TEST(PacmanTest, SignMatchesMembership) {
  Rng rng(1);
  const PacmanParams params;
  const double band = 2e-4;
  int agree = 0, total = 0;
  while (total < 10000) {
    const Vec3 p = rng.in_box(Vec3{-1.2, -1.2, -1.2}, Vec3{1.2, 1.2, 1.2});
    if (pacman_boundary_distance(p, params) < band) continue;
    ++total;
    agree += (sdf_pacman(p, params) < 0) == pacman_member(p, params) ? 1 : 0;
  }
  EXPECT_GE(agree, 9990);
}

// ---- Julia ----

TEST(JuliaTest, UnitBallBoundForZeroSeed) {
  JuliaParams params;
  params.c = Quaternion{};
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const Vec3 dir = rng.unit_vector();
    for (double radius : {2.0, rng.uniform(1.05, 4.5)}) {
      const double de = sdf_julia(dir * radius, params);
      EXPECT_GT(de, 0.0);
      EXPECT_LE(de, (radius - 1.0) * (1 + 1e-3)) << "radius " << radius;
    }
  }
}

TEST(JuliaTest, GrowsOutsideEscapeRadius) {
  const JuliaParams params;
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vec3 dir = rng.unit_vector();
    double prev = sdf_julia(dir * (params.escape_radius + 0.01), params);
    for (double r = params.escape_radius + 0.5; r < 40; r += 0.5) {
      const double de = sdf_julia(dir * r, params);
      EXPECT_GT(de, prev);
      prev = de;
    }
  }
}

TEST(JuliaTest, CutPlaneDominates) {
  JuliaParams params;
  params.cut = CutPlane{Vec3{0, 0, -1}, 0.0};
  const Vec3 p{0.1, 0.1, -2.0};
  JuliaParams uncut = params;
  uncut.cut.reset();
  ASSERT_GT(2.0, sdf_julia(p, uncut));
  EXPECT_DOUBLE_EQ(sdf_julia(p, params), 2.0);
  // On the kept side far from the plane, the fractal estimate wins.
  const Vec3 q{0.0, 0.0, 3.0};
  EXPECT_DOUBLE_EQ(sdf_julia(q, params), sdf_julia(q, uncut));
}

// ---- Mandelbulb ----

// Power-8 triplex orbit, escaping when |z| > 2.
bool mandelbulb_orbit_bounded(const Vec3& c, int iterations) {
  Vec3 z{};
  for (int i = 0; i < iterations; ++i) {
    const double r = length(z);
    if (r > 2.0) return false;
    if (r == 0.0) {
      z = c;
      continue;
    }
    const double theta = 8 * std::acos(z.z / r), phi = 8 * std::atan2(z.y, z.x), r8 = std::pow(r, 8);
    z = Vec3{r8 * std::sin(theta) * std::cos(phi), r8 * std::sin(theta) * std::sin(phi), r8 * std::cos(theta)} + c;
  }
  return length(z) <= 2.0;
}

TEST(MandelbulbTest, OriginIsInside) {
  ASSERT_TRUE(mandelbulb_orbit_bounded(Vec3{}, 100));
  for (int iterations : {1, 4, 8, 20}) {
    EXPECT_LE(sdf_mandelbulb(Vec3{}, MandelbulbParams{8.0, iterations, 2.0}), 0.0);
  }
}

TEST(MandelbulbTest, ExteriorIsPositive) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    EXPECT_GT(sdf_mandelbulb(rng.unit_vector() * 2.0, MandelbulbParams{}), 0.0);
  }
}

TEST(MandelbulbTest, IterationCountIsObservable) {
  // Walk inward until the orbit survives the first step but still escapes within 20.
  const Vec3 dir = normalize(Vec3{0.9, 0.5, 0.3});
  Vec3 p = dir * 1.2;
  while (!mandelbulb_orbit_bounded(p, 2)) p = p - dir * 0.01;
  ASSERT_FALSE(mandelbulb_orbit_bounded(p, 20));
  const double few = sdf_mandelbulb(p, MandelbulbParams{8.0, 1, 2.0});
  const double many = sdf_mandelbulb(p, MandelbulbParams{8.0, 20, 2.0});
  EXPECT_GT(few, 0.0);
  EXPECT_GT(many, 0.0);
  EXPECT_NE(few, many);
}

TEST(MandelbulbTest, AnimationSchedule) {
  const MandelbulbAnimation a;
  EXPECT_EQ(a.iterations_at(0.0), 2);
  EXPECT_EQ(a.iterations_at(5.0), 7);
  EXPECT_EQ(a.iterations_at(9.999), 11);
  EXPECT_EQ(a.iterations_at(10.0), 2);
  EXPECT_EQ(a.iterations_at(25.0), 7);
  int prev = 0;
  for (double t = 0; t < a.period; t += 0.01) {
    const int n = a.iterations_at(t);
    EXPECT_GE(n, prev);
    EXPECT_GE(n, a.min_iterations);
    EXPECT_LT(n, a.max_iterations);
    prev = n;
  }
}

// ---- Lipschitz spot checks ----

// Pac-man is min/max of exact distances, so L = 1. The fractal estimates jump
// where the escape iteration count changes; these bounds are empirical and
// only cover exterior pairs, which is where sphere tracing steps.
double lipschitz_bound(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::kPacman:
      return 1.0;
    case PrimitiveType::kJuliaSets:
      return 10.0;
    case PrimitiveType::kMandelbulb:
      return 20.0;
  }
  return 0.0;
}

TEST(SdfTest, LipschitzSpotCheck) {
  const SampleShaderParams params;
  for (PrimitiveType type : kPrimitives) {
    Rng rng(5);
    const Aabb box = setup_for(type).box;
    const bool exterior_only = type != PrimitiveType::kPacman;
    for (double time : {0.0, 3.0, 6.0, 9.5}) {
      int pairs = 0;
      for (int i = 0; i < 20000; ++i) {
        const Vec3 x = rng.in_box(box.min, box.max);
        const Vec3 y = x + rng.unit_vector() * rng.uniform(1e-4, 0.05);
        const double fx = evaluate_sdf(type, x, params, time);
        const double fy = evaluate_sdf(type, y, params, time);
        if (exterior_only && (fx <= 0 || fy <= 0)) continue;
        ++pairs;
        EXPECT_LE(std::abs(fx - fy), lipschitz_bound(type) * length(x - y) * (1 + 1e-9)) << to_string(type);
      }
      EXPECT_GT(pairs, 5000);
    }
  }
}

// ---- Sphere tracing ----

TEST(SphereTraceTest, UnitSphere) {
  auto f = [](const Vec3& p) { return sdf_sphere(p, Vec3{}, 1.0); };
  const SphereTraceResult r = sphere_trace(f, Vec3{0, 0, -3}, Vec3{0, 0, 1}, 0.0, 10.0, SphereTraceConfig{});
  ASSERT_TRUE(r.hit);
  EXPECT_NEAR(r.t, 2.0, 1e-3);
  const Vec3 n = central_difference_normal(f, Vec3{0, 0, -3} + Vec3{0, 0, 1} * r.t, 2e-4);
  EXPECT_NEAR(n.z, -1.0, 1e-6);
  // Non-unit directions still report t in ray units.
  const SphereTraceResult scaled = sphere_trace(f, Vec3{0, 0, -3}, Vec3{0, 0, 2}, 0.0, 10.0, SphereTraceConfig{});
  ASSERT_TRUE(scaled.hit);
  EXPECT_NEAR(scaled.t, 1.0, 1e-3);
}

TEST(SphereTraceTest, EmptyIntervalEvaluatesNothing) {
  int calls = 0;
  auto f = [&](const Vec3& p) {
    ++calls;
    return sdf_sphere(p, Vec3{}, 1.0);
  };
  const SphereTraceResult r = sphere_trace(f, Vec3{0, 0, -3}, Vec3{0, 0, 1}, 5.0, 4.0, SphereTraceConfig{});
  EXPECT_FALSE(r.hit);
  EXPECT_EQ(r.evaluations, 0);
  EXPECT_EQ(calls, 0);
  // A ray that misses the box never reaches an intersection shader.
  const Aabb box{Vec3{-1, -1, -1}, Vec3{1, 1, 1}};
  EXPECT_FALSE(intersect_slabs(box, Vec3{3, 3, -3}, reciprocal(Vec3{0, 0, 1}), 0.0, 100.0).has_value());
}

TEST(SphereTraceTest, ConfigValidation) {
  EXPECT_NO_THROW(SphereTraceConfig{}.validate());
  EXPECT_THROW((SphereTraceConfig{0.0, 10, 1.0}.validate()), Error);
  EXPECT_THROW((SphereTraceConfig{1e-4, 0, 1.0}.validate()), Error);
  EXPECT_THROW((SphereTraceConfig{1e-4, 10, 0.0}.validate()), Error);
  EXPECT_THROW((SphereTraceConfig{1e-4, 10, 1.5}.validate()), Error);
}

TEST(IntersectionTest, ReportedPointsAreOnTheSurface) {
  const SampleShaderParams params;
  for (PrimitiveType type : kPrimitives) {
    const auto hits = hitting_rays(type, 1000, 6);
    ASSERT_EQ(hits.size(), 1000u) << to_string(type);
    for (const SampledHit& h : hits) {
      const Vec3 p = h.ray.origin + h.ray.direction * h.hit.trace.t;
      EXPECT_LE(std::abs(evaluate_sdf(type, p, params, 0.0)), params.epsilon) << to_string(type);
      EXPECT_GE(h.hit.trace.t, h.ray.t_enter);
      EXPECT_LE(h.hit.trace.t, h.ray.t_exit);
    }
  }
}

TEST(IntersectionTest, NoEarlierSignChange) {
  const SampleShaderParams params;
  for (PrimitiveType type : kPrimitives) {
    int violations = 0;
    const auto hits = hitting_rays(type, 300, 7);
    for (const SampledHit& h : hits) {
      if (testing::earlier_crossing(type, h, params)) ++violations;
    }
    EXPECT_EQ(violations, 0) << to_string(type);
  }
}

TEST(IntersectionTest, CentralAndForwardNormalsAgree) {
  const SampleShaderParams params;
  for (PrimitiveType type : kPrimitives) {
    auto f = [&](const Vec3& p) { return evaluate_sdf(type, p, params, 0.0); };
    int bad = 0;
    const auto hits = hitting_rays(type, 1000, 8);
    ASSERT_EQ(hits.size(), 1000u);
    for (const SampledHit& h : hits) {
      const Vec3 p = h.ray.origin + h.ray.direction * h.hit.trace.t;
      // The shader's normal against a forward difference with a step 100x finer.
      const Vec3 central = h.hit.normal;
      EXPECT_LT(length(central - central_difference_normal(f, p, 2 * params.epsilon)), 1e-12);
      const Vec3 forward = forward_difference_normal(f, p, params.epsilon / 50);
      const double angle = std::acos(std::clamp(dot(central, forward), -1.0, 1.0)) * 180.0 / kPi;
      if (angle > 1.0) ++bad;
    }
    EXPECT_EQ(bad, 0) << to_string(type);
  }
}

// ---- Shading ----

TEST(ShadingTest, LightAlongNormalIsMaximalDiffuse) {
  PrimitiveConstantBuffer material;
  material.albedo = Rgba{0.8f, 0.4f, 0.2f, 1.0f};
  material.diffuse_coef = 0.9f;
  const Rgba white{1, 1, 1, 1};
  const Vec3 n{0, 1, 0};
  const PhongTerms t = phong(n, n, normalize(Vec3{1, 1, 0}), material, Rgba{0.1f, 0.1f, 0.1f, 1}, white);
  EXPECT_FLOAT_EQ(t.diffuse.r, 0.9f * 0.8f);
  EXPECT_FLOAT_EQ(t.diffuse.g, 0.9f * 0.4f);
  EXPECT_FLOAT_EQ(t.diffuse.b, 0.9f * 0.2f);
  // Any other light direction gives less.
  const PhongTerms tilted =
      phong(n, normalize(Vec3{0.3, 1, 0}), normalize(Vec3{1, 1, 0}), material, Rgba{0.1f, 0.1f, 0.1f, 1}, white);
  EXPECT_LT(tilted.diffuse.r, t.diffuse.r);
}

TEST(ShadingTest, GrazingAndOccluded) {
  PrimitiveConstantBuffer material;
  material.albedo = Rgba{0.5f, 0.5f, 0.5f, 1.0f};
  const Rgba ambient{0.2f, 0.3f, 0.4f, 1};
  const PhongTerms grazing = phong(Vec3{0, 1, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, material, ambient, Rgba{1, 1, 1, 1});
  EXPECT_EQ(grazing.diffuse.r, 0.0f);
  EXPECT_EQ(grazing.diffuse.g, 0.0f);
  const PhongTerms lit = phong(Vec3{0, 1, 0}, Vec3{0, 1, 0}, Vec3{0, 1, 0}, material, ambient, Rgba{1, 1, 1, 1});
  const Rgba shadowed = combine(lit, true);
  EXPECT_FLOAT_EQ(shadowed.r, 0.5f * 0.2f);
  EXPECT_FLOAT_EQ(shadowed.g, 0.5f * 0.3f);
  EXPECT_FLOAT_EQ(shadowed.b, 0.5f * 0.4f);
  const Rgba unshadowed = combine(lit, false);
  EXPECT_GT(unshadowed.r, shadowed.r);
}

// ---- Camera and miss ----

TEST(CameraTest, CenterPixelLooksForward) {
  const Camera camera;
  SceneConstantBuffer cb;
  cb.camera_position = camera.position;
  cb.projection_to_world = projection_to_world(camera, 321.0 / 241.0);
  const Vec3 forward = normalize(camera.look_at - camera.position);
  const CameraRay center = primary_ray(PixelCoord{160, 120, 321, 241}, cb);
  EXPECT_LT(length(center.direction - forward), 1e-6);
  EXPECT_LT(length(center.origin - camera.position), 1e-6);

  const std::array<CameraRay, 4> corners = {
      primary_ray(PixelCoord{0, 0, 321, 241}, cb), primary_ray(PixelCoord{320, 0, 321, 241}, cb),
      primary_ray(PixelCoord{0, 240, 321, 241}, cb), primary_ray(PixelCoord{320, 240, 321, 241}, cb)};
  const double cos0 = dot(corners[0].direction, forward);
  for (const CameraRay& c : corners) {
    EXPECT_NEAR(length(c.direction), 1.0, 1e-9);
    EXPECT_NEAR(dot(c.direction, forward), cos0, 1e-6);
  }
  // Mirror pairs: left/right and top/bottom sum to a multiple of forward.
  const Vec3 lr = corners[0].direction + corners[3].direction;
  const Vec3 rl = corners[1].direction + corners[2].direction;
  EXPECT_LT(length(normalize(lr) - forward), 1e-6);
  EXPECT_LT(length(normalize(rl) - forward), 1e-6);
  // Top row of the image points above the forward axis.
  EXPECT_GT(corners[0].direction.y, corners[2].direction.y);
}

TEST(CameraTest, Validation) {
  Camera bad;
  bad.vertical_fov_degrees = 180.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = Camera{};
  bad.look_at = bad.position;
  EXPECT_THROW(bad.validate(), Error);
  bad = Camera{};
  bad.up = Vec3{0, 0, 1} * 0.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(MissShaderTest, BackgroundAndShadow) {
  ShaderRegistry reg;
  register_sample_shaders(reg, SampleShaderParams{});
  RayContext ctx;
  ctx.world_ray = TraversalRay{Vec3{}, Vec3{0, 1, 0}, 0, 1};
  Payload radiance(RayPayload{});
  (*reg.miss("Miss"))(radiance, ctx);
  EXPECT_EQ(radiance.as<RayPayload>().color, background(Vec3{0, 1, 0}));
  EXPECT_NE(background(Vec3{0, 1, 0}), background(Vec3{1, 0, 0}));
  Payload shadow(ShadowRayPayload{true});
  (*reg.miss("Miss_Shadow"))(shadow, ctx);
  EXPECT_FALSE(shadow.as<ShadowRayPayload>().hit);
  EXPECT_FALSE(ShadowRayPayload{}.hit);
}

// ---- Shadows through the sample pipeline ----

// World-space occlusion by marching every procedural instance's SDF along the segment.
struct OcclusionOracle {
  const SampleSceneBuilder& builder;
  SampleShaderParams params;

  // Minimum SDF value along the segment over all procedural instances.
  double min_along(const Vec3& a, const Vec3& b) const {
    double best = std::numeric_limits<double>::infinity();
    const InstanceBuffer& instances = builder.instance_buffer();
    std::size_t k = 0;
    for (const GeometryDescription& g : builder.description().geometries) {
      if (g.kind != GeometryKind::kProcedural) continue;
      for (std::size_t n = 0; n < g.instances.size(); ++n, ++k) {
        const Mat4& to_local = instances.at(k).world_to_local;
        const Vec3 la = to_local.transform_point(a), lb = to_local.transform_point(b);
        const auto span = intersect_slabs(g.aabb, la, reciprocal(lb - la), 0.0, 1.0);
        if (!span) continue;
        constexpr int kSamples = 4000;
        for (int s = 0; s <= kSamples; ++s) {
          const double t = span->first + (span->second - span->first) * s / kSamples;
          best = std::min(best, evaluate_sdf(g.primitive, la + (lb - la) * t, params, builder.frame().time));
        }
      }
    }
    return best;
  }
};

TEST(SampleShadowTest, ShadowPayloadMatchesOcclusionOracle) {
  testing::SampleFixture f = testing::make_sample();
  const OcclusionOracle oracle{*f.builder, f.builder->description().shaders};
  const Vec3 light = f.builder->scene_constants().light_position;
  Rng rng(9);
  int occluded = 0, tested = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec3 floor{rng.uniform(-6, 6), 2e-3, rng.uniform(-7, 4)};
    const double margin = oracle.min_along(floor, light);
    // Skip grazing segments where sampling cannot decide.
    if (std::abs(margin) < 5e-3) continue;
    Payload payload(ShadowRayPayload{true});
    f.pipeline->trace_ray(TraceContext{TraversalRay{floor, light - floor, 1e-4, 1.0}, kShadowRay, kSampleRayTypeCount,
                                       0, kRayFlagAcceptFirstHitAndEndSearch},
                          payload);
    EXPECT_EQ(payload.as<ShadowRayPayload>().hit, margin < 0) << floor.x << "," << floor.z;
    ++tested;
    occluded += margin < 0 ? 1 : 0;
  }
  EXPECT_GT(tested, 300);
  EXPECT_GT(occluded, 5);
}

TEST(SampleShadowTest, OccludedPlanePointIsAmbientOnly) {
  testing::SampleFixture f = testing::make_sample();
  const SceneConstantBuffer& cb = f.builder->scene_constants();
  const GeometryDescription* pacman = nullptr;
  const GeometryDescription* plane = nullptr;
  for (const GeometryDescription& g : f.builder->description().geometries) {
    if (g.id == "Pacman") pacman = &g;
    if (g.kind == GeometryKind::kTriangle) plane = &g;
  }
  ASSERT_TRUE(pacman && plane);
  // Project the first Pac-man's center onto the floor away from the light.
  const Vec3 c = pacman->instances[0].transform_point(Vec3{});
  const double s = c.y / (cb.light_position.y - c.y);
  const Vec3 floor = c + (c - cb.light_position) * s;
  const OcclusionOracle oracle{*f.builder, f.builder->description().shaders};
  ASSERT_LT(oracle.min_along(floor + Vec3{0, 2e-3, 0}, cb.light_position), 0.0);

  Payload payload(RayPayload{});
  f.pipeline->trace_ray(TraceContext{TraversalRay{floor + Vec3{0, 0.02, 0}, Vec3{0, -1, 0}, 1e-4, 1.0}, kRadianceRay,
                                     kSampleRayTypeCount, 0, kRayFlagNone},
                        payload);
  const Rgba& albedo = plane->material.albedo;
  const Rgba color = payload.as<RayPayload>().color;
  EXPECT_NEAR(color.r, albedo.r * cb.light_ambient.r, 1e-6);
  EXPECT_NEAR(color.g, albedo.g * cb.light_ambient.g, 1e-6);
  EXPECT_NEAR(color.b, albedo.b * cb.light_ambient.b, 1e-6);
}

}  // namespace
}  // namespace procrt
