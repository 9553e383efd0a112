// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <string>

#include "procrt/sample_scene.hpp"
#include "procrt/scene.hpp"
#include "test_util.hpp"

namespace procrt {
namespace {

using testing::error_code_of;

Geometry box_geometry(const std::string& id, std::vector<Mat4> placements = {Mat4::identity()}) {
  Geometry::Instances instances;
  for (const Mat4& m : placements) instances.push_back(InstanceTransform::from_local_to_world(m));
  return Geometry(id, Aabb{Vec3{-1, -1, -1}, Vec3{1, 1, 1}}, std::move(instances));
}

Geometry quad_geometry(const std::string& id) { return Geometry(id, unit_quad(), {InstanceTransform{}}); }

TEST(SceneTest, AddAndQueryRay) {
  Scene scene;
  scene.add_ray(RayType{"Radiance", "Miss", Payload(RayPayload{})});
  const RayType& r = scene.ray("Radiance");
  EXPECT_EQ(r.id, EntityId("Radiance"));
  EXPECT_EQ(r.miss_shader, "Miss");
  EXPECT_TRUE(r.payload_template.holds<RayPayload>());
}

TEST(SceneTest, DuplicateIdsAreRejectedPerCategory) {
  Scene scene;
  scene.add_ray(RayType{"Radiance", "Miss", Payload(RayPayload{})});
  EXPECT_EQ(error_code_of([&] { scene.add_ray(RayType{"Radiance", "Miss2", Payload(RayPayload{})}); }),
            ErrorCode::kDuplicateId);
  // Same id in another category is fine.
  EXPECT_NO_THROW(scene.add_hit_group(HitGroup("Radiance", "HitGroup_Radiance", "", "", "")));
  scene.add_geometry(quad_geometry("Plane"));
  EXPECT_EQ(error_code_of([&] { scene.add_geometry(quad_geometry("Plane")); }), ErrorCode::kDuplicateId);
}

TEST(SceneTest, CreationOrderPreserved) {
  Scene scene;
  for (const char* id : {"Julia", "Pacman", "Mandelbulb"}) scene.add_geometry(box_geometry(id));
  std::vector<std::string> ids;
  for (const Geometry& g : scene.geometries()) ids.push_back(g.id().str());
  EXPECT_EQ(ids, (std::vector<std::string>{"Julia", "Pacman", "Mandelbulb"}));
}

TEST(SceneTest, UnknownIdIsNotFound) {
  Scene scene;
  EXPECT_EQ(error_code_of([&] { (void)scene.geometry("Nope"); }), ErrorCode::kNotFound);
  EXPECT_EQ(error_code_of([&] { (void)scene.ray("Nope"); }), ErrorCode::kNotFound);
  EXPECT_EQ(error_code_of([&] { (void)scene.local_signature("Nope"); }), ErrorCode::kNotFound);
  EXPECT_EQ(error_code_of([] { EntityId(""); }), ErrorCode::kInvalidArgument);
}

TEST(SceneTest, GlobalGeometryIsThePlaneMesh) {
  testing::SampleFixture f = testing::make_sample();
  const Geometry& g = f.pipeline->scene().geometry("GlobalGeometry");
  ASSERT_EQ(g.kind(), GeometryKind::kTriangle);
  EXPECT_EQ(g.mesh().triangle_count(), 2u);
}

TEST(SceneTest, LookupDoesNotScan) {
  using Clock = std::chrono::steady_clock;
  auto time_lookups = [](int entities) {
    Scene scene;
    for (int i = 0; i < entities; ++i) {
      scene.add_hit_group(HitGroup("group" + std::to_string(i), "", "", "", ""));
    }
    const EntityId last("group" + std::to_string(entities - 1));
    std::size_t sink = 0;
    const auto start = Clock::now();
    for (int i = 0; i < 200000; ++i) sink += scene.hit_group(last).id.str().size();
    const auto end = Clock::now();
    EXPECT_GT(sink, 0u);
    return std::chrono::duration<double>(end - start).count();
  };
  const double small = time_lookups(10);
  const double large = time_lookups(10000);
  // A linear scan would be ~1000x slower; hashing stays within a small factor.
  EXPECT_LT(large, small * 20 + 0.01);
}

TEST(SceneTest, RoundTripForEveryCategory) {
  Scene scene;
  scene.add_ray(RayType{"Shadow", "Miss_Shadow", Payload(ShadowRayPayload{})});
  scene.add_hit_group(HitGroup("Pacman", "HitGroup_Pacman", "", "ClosestHit_Pacman", "Intersection_Pacman"));
  scene.add_geometry(box_geometry("Pacman"));
  RootSignature global("GlobalSignature", SignatureScope::kGlobal);
  global.add_descriptor(RootComponent(SceneConstantBuffer{}), ViewKind::kCbv, 0);
  scene.add_global_signature(global);
  RootSignature local("Procedural", SignatureScope::kLocal);
  local.add_constant(RootComponent(PrimitiveConstantBuffer{}), 1);
  local.set_root_arguments_type(RootArguments(ProceduralRootArguments{}));
  scene.add_local_signature(local);

  EXPECT_EQ(scene.ray("Shadow").miss_shader, "Miss_Shadow");
  EXPECT_EQ(*scene.hit_group("Pacman").intersection, "Intersection_Pacman");
  EXPECT_FALSE(scene.hit_group("Pacman").any_hit.has_value());
  EXPECT_EQ(scene.geometry("Pacman").kind(), GeometryKind::kProcedural);
  EXPECT_EQ(scene.global_signature("GlobalSignature").scope(), SignatureScope::kGlobal);
  EXPECT_TRUE(scene.local_signature("Procedural").root_arguments_template()->holds<ProceduralRootArguments>());
  EXPECT_TRUE(scene.contains(EntityCategory::kGeometry, "Pacman"));
  EXPECT_FALSE(scene.contains(EntityCategory::kRay, "Pacman"));
  EXPECT_EQ(scene.ray_contribution("Shadow"), 0u);
  EXPECT_EQ(error_code_of([&] { (void)scene.ray_contribution("Radiance"); }), ErrorCode::kUnknownId);
}

TEST(GeometryTest, Invariants) {
  TriangleMesh bad_count = unit_quad();
  bad_count.indices.pop_back();
  EXPECT_EQ(error_code_of([&] { Geometry("g", bad_count, {InstanceTransform{}}); }), ErrorCode::kValidationFailure);
  TriangleMesh bad_index = unit_quad();
  bad_index.indices[0] = 4;
  EXPECT_EQ(error_code_of([&] { Geometry("g", bad_index, {InstanceTransform{}}); }), ErrorCode::kValidationFailure);
  EXPECT_EQ(error_code_of([] { Geometry("g", Aabb{Vec3{0, 0, 0}, Vec3{1, 0, 1}}, {InstanceTransform{}}); }),
            ErrorCode::kValidationFailure);
  EXPECT_EQ(error_code_of([] { Geometry("g", unit_quad(), {}); }), ErrorCode::kValidationFailure);
  InstanceTransform wrong;
  wrong.world_to_local = Mat4::scale(Vec3{2, 2, 2});
  EXPECT_EQ(error_code_of([&] { Geometry("g", unit_quad(), {wrong}); }), ErrorCode::kValidationFailure);
  EXPECT_EQ(error_code_of([] { InstanceTransform::from_local_to_world(Mat4::scale(Vec3{1, 0, 1})); }),
            ErrorCode::kValidationFailure);
}

TEST(RootSignatureTest, RegistersAndTemplates) {
  RootSignature global("G", SignatureScope::kGlobal);
  global.add_descriptor(RootComponent(SceneConstantBuffer{}), ViewKind::kCbv, 0);
  EXPECT_EQ(error_code_of([&] { global.add_constant(RootComponent(PrimitiveConstantBuffer{}), 0); }),
            ErrorCode::kValidationFailure);
  // Same slot, different view kind is a different register.
  EXPECT_NO_THROW(global.add_descriptor(RootComponent(DontApply{"as"}), ViewKind::kSrv, 0));
  EXPECT_EQ(error_code_of([&] { global.set_root_arguments_type(RootArguments(TriangleRootArguments{})); }),
            ErrorCode::kValidationFailure);
  EXPECT_TRUE(global.component(Register{ViewKind::kCbv, 0}).holds<SceneConstantBuffer>());
  EXPECT_EQ(error_code_of([&] { (void)global.component(Register{ViewKind::kCbv, 5}); }), ErrorCode::kNotFound);

  Scene scene;
  RootSignature local("L", SignatureScope::kLocal);
  EXPECT_EQ(error_code_of([&] { scene.add_local_signature(local); }), ErrorCode::kValidationFailure);
  EXPECT_EQ(error_code_of([&] { scene.add_global_signature(local); }), ErrorCode::kValidationFailure);
  EXPECT_EQ(error_code_of([&] { scene.add_local_signature(global); }), ErrorCode::kValidationFailure);
}

TEST(SceneTest, FreezeBlocksEdits) {
  Scene scene;
  scene.add_geometry(box_geometry("A"));
  scene.freeze_geometry();
  EXPECT_EQ(error_code_of([&] { scene.add_geometry(box_geometry("B")); }), ErrorCode::kSceneFrozen);
  EXPECT_NO_THROW(scene.add_ray(RayType{"Radiance", "Miss", Payload(RayPayload{})}));
  scene.freeze();
  EXPECT_EQ(error_code_of([&] { scene.add_ray(RayType{"Shadow", "Miss", Payload(ShadowRayPayload{})}); }),
            ErrorCode::kSceneFrozen);
}

TEST(InstanceBufferTest, CreationOrderWithTwoPacmen) {
  Scene scene;
  scene.add_geometry(quad_geometry("GlobalGeometry"));
  const Mat4 julia = Mat4::translation(Vec3{-3, 1, 0});
  const Mat4 pac0 = Mat4::translation(Vec3{0, 1, -2});
  const Mat4 pac1 = Mat4::translation(Vec3{1, 1, -3}) * Mat4::rotation_y(0.5);
  const Mat4 bulb = Mat4::translation(Vec3{3, 1, 0}) * Mat4::scale(Vec3{1.5, 1.5, 1.5});
  scene.add_geometry(box_geometry("Julia", {julia}));
  scene.add_geometry(box_geometry("Pacman", {pac0, pac1}));
  scene.add_geometry(box_geometry("Mandelbulb", {bulb}));

  // Oracle: procedural instances in (geometry, instance) creation order.
  const std::vector<Mat4> expected = {julia, pac0, pac1, bulb};
  const InstanceBuffer buffer = build_instance_buffer(scene);
  ASSERT_EQ(buffer.size(), expected.size());
  EXPECT_EQ(buffer.size(), scene.procedural_instance_count());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    EXPECT_EQ(buffer.at(k).local_to_world, expected[k]);
    EXPECT_LT(identity_error(buffer.at(k).local_to_world, buffer.at(k).world_to_local), 1e-5);
  }
}

TEST(InstanceBufferTest, TriangleOnlySceneIsEmpty) {
  Scene scene;
  scene.add_geometry(quad_geometry("GlobalGeometry"));
  EXPECT_EQ(build_instance_buffer(scene).size(), 0u);
  EXPECT_EQ(error_code_of([&] { (void)build_instance_buffer(scene).at(0); }), ErrorCode::kOutOfRange);
}

}  // namespace
}  // namespace procrt
