// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/sample_scene.hpp"

#include <utility>

namespace procrt {

TriangleMesh unit_quad() {
  TriangleMesh mesh;
  const Vec3 up{0.0, 1.0, 0.0};
  mesh.vertices = {Vertex{Vec3{-1, 0, -1}, up}, Vertex{Vec3{-1, 0, 1}, up}, Vertex{Vec3{1, 0, 1}, up},
                   Vertex{Vec3{1, 0, -1}, up}};
  mesh.indices = {0, 1, 2, 0, 2, 3};
  return mesh;
}

namespace {

Mat4 place(const Vec3& position, double scale, double yaw_degrees) {
  return Mat4::translation(position) * Mat4::rotation_y(yaw_degrees * kPi / 180.0) *
         Mat4::scale(Vec3{scale, scale, scale});
}

PrimitiveConstantBuffer material(Rgba albedo, float step_scale) {
  PrimitiveConstantBuffer m;
  m.albedo = albedo;
  m.step_scale = step_scale;
  return m;
}

}  // namespace

SceneDescription default_scene_description() {
  SceneDescription d;

  GeometryDescription plane;
  plane.id = "GlobalGeometry";
  plane.kind = GeometryKind::kTriangle;
  plane.mesh = unit_quad();
  plane.material = material(Rgba{0.72f, 0.72f, 0.68f, 1.0f}, 1.0f);
  plane.material.specular_coef = 0.1f;
  plane.instances = {Mat4::scale(Vec3{12.0, 1.0, 12.0})};
  d.geometries.push_back(plane);

  GeometryDescription julia;
  julia.id = "Julia";
  julia.primitive = PrimitiveType::kJuliaSets;
  julia.aabb = Aabb{Vec3{-1.5, -1.5, -1.5}, Vec3{1.5, 1.5, 1.5}};
  julia.material = material(Rgba{0.95f, 0.45f, 0.2f, 1.0f}, 0.5f);
  julia.instances = {place(Vec3{-3.4, 1.6, 0.8}, 1.1, 20.0)};
  d.geometries.push_back(julia);

  GeometryDescription pacman;
  pacman.id = "Pacman";
  pacman.primitive = PrimitiveType::kPacman;
  pacman.aabb = Aabb{Vec3{-1.1, -1.1, -1.1}, Vec3{1.1, 1.1, 1.1}};
  pacman.material = material(Rgba{1.0f, 0.85f, 0.1f, 1.0f}, 1.0f);
  pacman.instances = {place(Vec3{-0.9, 0.8, -3.0}, 0.75, 115.0), place(Vec3{1.1, 0.8, -4.2}, 0.75, 65.0)};
  d.geometries.push_back(pacman);

  GeometryDescription mandelbulb;
  mandelbulb.id = "Mandelbulb";
  mandelbulb.primitive = PrimitiveType::kMandelbulb;
  mandelbulb.aabb = Aabb{Vec3{-1.25, -1.25, -1.25}, Vec3{1.25, 1.25, 1.25}};
  mandelbulb.material = material(Rgba{0.35f, 0.65f, 0.95f, 1.0f}, 0.5f);
  mandelbulb.instances = {place(Vec3{3.1, 1.5, 0.6}, 1.2, 0.0) * Mat4::rotation_x(-kPi / 2.0)};
  d.geometries.push_back(mandelbulb);

  return d;
}

std::pair<std::string, std::string> hit_groups_for(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::kMandelbulb:
      return {"Mandelbulb", "Mandelbulb_Shadow"};
    case PrimitiveType::kPacman:
      return {"Pacman", "Pacman_Shadow"};
    case PrimitiveType::kJuliaSets:
      return {"Julia", "Julia_Shadow"};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown primitive type");
}

SampleSceneBuilder::SampleSceneBuilder(SceneDescription description, FrameParameters frame)
    : description_(std::move(description)), frame_(frame), scene_(std::make_shared<Scene>()) {
  if (frame_.width == 0 || frame_.height == 0) throw Error(ErrorCode::kInvalidArgument, "empty frame");
  frame_.camera.validate();
}

void SampleSceneBuilder::build() {
  build_rays();
  build_hit_groups();
  build_geometry();
  build_constant_buffers();
  build_instance_buffer();
  build_acceleration_structure();
  build_root_signatures();
  build_shader_table_entries();
}

void SampleSceneBuilder::build_rays() {
  steps_.emplace_back("build_rays");
  scene_->add_ray(RayType{"Radiance", "Miss", Payload(RayPayload{})});
  scene_->add_ray(RayType{"Shadow", "Miss_Shadow", Payload(ShadowRayPayload{})});
}

void SampleSceneBuilder::build_hit_groups() {
  steps_.emplace_back("build_hit_groups");
  scene_->add_hit_group(HitGroup("Triangle", "HitGroup_Triangle", "", "ClosestHit_Triangle", ""));
  scene_->add_hit_group(HitGroup("Triangle_Shadow", "HitGroup_Triangle_Shadow", "", "", ""));
  scene_->add_hit_group(HitGroup("Pacman", "HitGroup_Pacman", "", "ClosestHit_Pacman", "Intersection_Pacman"));
  scene_->add_hit_group(HitGroup("Pacman_Shadow", "HitGroup_Pacman_Shadow", "", "", "Intersection_Pacman"));
  scene_->add_hit_group(
      HitGroup("Mandelbulb", "HitGroup_Mandelbulb", "", "ClosestHit_Mandelbulb", "Intersection_Mandelbulb"));
  scene_->add_hit_group(HitGroup("Mandelbulb_Shadow", "HitGroup_Mandelbulb_Shadow", "", "", "Intersection_Mandelbulb"));
  scene_->add_hit_group(HitGroup("Julia", "HitGroup_Julia", "", "ClosestHit_Julia", "Intersection_Julia"));
  scene_->add_hit_group(HitGroup("Julia_Shadow", "HitGroup_Julia_Shadow", "", "", "Intersection_Julia"));
}

void SampleSceneBuilder::build_geometry() {
  steps_.emplace_back("build_geometry");
  std::size_t triangle_geometries = 0;
  for (const GeometryDescription& g : description_.geometries) {
    Geometry::Instances instances;
    instances.reserve(g.instances.size());
    for (const Mat4& m : g.instances) instances.push_back(InstanceTransform::from_local_to_world(m));
    if (g.kind == GeometryKind::kTriangle) {
      if (++triangle_geometries > 1) {
        throw Error(ErrorCode::kValidationFailure,
                    "geometry '" + g.id + "': only one triangle geometry can be bound to the global signature");
      }
      scene_->add_geometry(Geometry(g.id, g.mesh, std::move(instances)));
    } else {
      scene_->add_geometry(Geometry(g.id, g.aabb, std::move(instances)));
    }
  }
}

void SampleSceneBuilder::build_constant_buffers() {
  steps_.emplace_back("build_constant_buffers");
  scene_cb_ = SceneConstantBuffer{};
  scene_cb_.camera_position = frame_.camera.position;
  scene_cb_.projection_to_world =
      projection_to_world(frame_.camera, static_cast<double>(frame_.width) / static_cast<double>(frame_.height));
  scene_cb_.light_position = description_.light.position;
  scene_cb_.light_ambient = description_.light.ambient;
  scene_cb_.light_diffuse = description_.light.diffuse;
  scene_cb_.elapsed_time = static_cast<float>(frame_.time);
  validate(scene_cb_);
  for (const GeometryDescription& g : description_.geometries) validate(g.material);
}

void SampleSceneBuilder::build_instance_buffer() {
  steps_.emplace_back("build_instance_buffer");
  instance_buffer_ = procrt::build_instance_buffer(*scene_);
}

void SampleSceneBuilder::build_acceleration_structure() {
  steps_.emplace_back("build_acceleration_structure");
  scene_->freeze_geometry();
  as_ = std::make_shared<const AccelerationStructure>(AccelerationStructure::build(*scene_));
}

const GeometryDescription* SampleSceneBuilder::triangle_geometry() const {
  for (const GeometryDescription& g : description_.geometries) {
    if (g.kind == GeometryKind::kTriangle) return &g;
  }
  return nullptr;
}

void SampleSceneBuilder::build_root_signatures() {
  steps_.emplace_back("build_root_signatures");
  RootSignature global("GlobalSignature", SignatureScope::kGlobal);
  global.add_descriptor_table({DescriptorRange{"RenderTarget", kOutputRegister.view, kOutputRegister.slot, 1}});
  global.add_descriptor(RootComponent(DontApply{"AccelerationStructure"}), kAccelerationStructureRegister.view,
                        kAccelerationStructureRegister.slot);
  global.add_descriptor(RootComponent(scene_cb_), kSceneConstantsRegister.view, kSceneConstantsRegister.slot);
  global.add_descriptor(RootComponent(instance_buffer_), kInstanceBufferRegister.view, kInstanceBufferRegister.slot);
  if (const GeometryDescription* tri = triangle_geometry()) {
    global.add_descriptor_table(
        {DescriptorRange{tri->id, kGeometryBuffersRegister.view, kGeometryBuffersRegister.slot, 2}});
  }
  scene_->add_global_signature(std::move(global));

  RootSignature triangle("Triangle", SignatureScope::kLocal);
  triangle.add_constant(RootComponent(PrimitiveConstantBuffer{}), kMaterialRegister.slot);
  triangle.set_root_arguments_type(RootArguments(TriangleRootArguments{}));
  scene_->add_local_signature(std::move(triangle));

  RootSignature procedural("Procedural", SignatureScope::kLocal);
  procedural.add_constant(RootComponent(PrimitiveConstantBuffer{}), kMaterialRegister.slot);
  procedural.add_constant(RootComponent(PrimitiveInstanceConstantBuffer{}), kPrimitiveInstanceRegister.slot);
  procedural.set_root_arguments_type(RootArguments(ProceduralRootArguments{}));
  scene_->add_local_signature(std::move(procedural));
}

void SampleSceneBuilder::build_shader_table_entries() {
  steps_.emplace_back("build_shader_table_entries");
  shader_table_ = std::make_unique<ShaderTable>(scene_);
  shader_table_->add_ray_gen("Raygen");
  shader_table_->add_miss("Radiance");
  shader_table_->add_miss("Shadow");

  std::uint32_t instance_index = 0;
  for (const GeometryDescription& g : description_.geometries) {
    if (g.kind == GeometryKind::kTriangle) {
      const TriangleRootArguments args{g.material};
      for (std::size_t k = 0; k < g.instances.size(); ++k) {
        shader_table_->add_common_entry(ShaderTableEntry{"Radiance", "Triangle", "Triangle", args});
        shader_table_->add_common_entry(ShaderTableEntry{"Shadow", "Triangle_Shadow", "Triangle", args});
      }
      continue;
    }
    const auto [radiance, shadow] = hit_groups_for(g.primitive);
    for (std::size_t k = 0; k < g.instances.size(); ++k) {
      ProceduralRootArguments args;
      args.material = g.material;
      args.instance.primitive_type = g.primitive;
      args.instance.instance_index = instance_index++;
      shader_table_->add_common_entry(ShaderTableEntry{"Radiance", radiance, "Procedural", args});
      shader_table_->add_common_entry(ShaderTableEntry{"Shadow", shadow, "Procedural", args});
    }
  }
}

ShaderTable& SampleSceneBuilder::shader_table() {
  if (!shader_table_) throw Error(ErrorCode::kValidationFailure, "shader table entries have not been built");
  return *shader_table_;
}

std::shared_ptr<const Pipeline> SampleSceneBuilder::create_pipeline() {
  ShaderRegistry registry;
  register_sample_shaders(registry, description_.shaders);
  PipelineConfig config;
  config.global_signature = "GlobalSignature";
  return create_pipeline(std::move(registry), std::move(config));
}

std::shared_ptr<const Pipeline> SampleSceneBuilder::create_pipeline(ShaderRegistry registry, PipelineConfig config) {
  auto table = std::make_shared<const BuiltShaderTable>(shader_table().build());
  scene_->freeze();
  return std::make_shared<const Pipeline>(scene_, as_, std::move(table), std::move(registry), std::move(config));
}

}  // namespace procrt
