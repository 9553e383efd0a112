// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

// The sample scene: a ground plane, a quaternion Julia set, Pac-men and a
// Mandelbulb, assembled step by step into a pipeline.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "procrt/accel.hpp"
#include "procrt/compat.hpp"
#include "procrt/pipeline.hpp"
#include "procrt/scene.hpp"
#include "procrt/shader_table.hpp"
#include "procrt/shaders.hpp"

namespace procrt {

struct GeometryDescription {
  std::string id;
  GeometryKind kind = GeometryKind::kProcedural;
  TriangleMesh mesh;                                     // triangle only
  Aabb aabb{Vec3{-1, -1, -1}, Vec3{1, 1, 1}};            // procedural only
  PrimitiveType primitive = PrimitiveType::kMandelbulb;  // procedural only
  PrimitiveConstantBuffer material;
  /// Local-to-world placement of each instance.
  std::vector<Mat4> instances;
};

struct LightDescription {
  Vec3 position{-4.0, 10.0, -6.0};
  Rgba ambient{0.22f, 0.22f, 0.26f, 1.0f};
  Rgba diffuse{0.9f, 0.9f, 0.85f, 1.0f};
};

struct SceneDescription {
  LightDescription light;
  std::vector<GeometryDescription> geometries;
  SampleShaderParams shaders;
};

/// Plane ("GlobalGeometry"), then "Julia", "Pacman" (two instances) and "Mandelbulb".
SceneDescription default_scene_description();

/// Unit quad in the xz plane, normals +y.
TriangleMesh unit_quad();

struct FrameParameters {
  Camera camera;
  std::uint32_t width = 320;
  std::uint32_t height = 240;
  double time = 0.0;
};

/// Hit group ids (radiance, shadow) serving a procedural primitive.
std::pair<std::string, std::string> hit_groups_for(PrimitiveType type);

class SampleSceneBuilder {
 public:
  SampleSceneBuilder(SceneDescription description, FrameParameters frame);

  /// Runs every step below in order.
  void build();

  void build_rays();
  void build_hit_groups();
  void build_geometry();
  void build_constant_buffers();
  void build_instance_buffer();
  void build_acceleration_structure();
  void build_root_signatures();
  void build_shader_table_entries();

  /// Builds the shader table, freezes the scene and resolves the pipeline.
  /// The first overload registers the sample shaders.
  std::shared_ptr<const Pipeline> create_pipeline();
  std::shared_ptr<const Pipeline> create_pipeline(ShaderRegistry registry, PipelineConfig config);

  const SceneDescription& description() const { return description_; }
  const FrameParameters& frame() const { return frame_; }
  const std::shared_ptr<Scene>& scene() const { return scene_; }
  const std::shared_ptr<const AccelerationStructure>& acceleration_structure() const { return as_; }
  ShaderTable& shader_table();
  const InstanceBuffer& instance_buffer() const { return instance_buffer_; }
  const SceneConstantBuffer& scene_constants() const { return scene_cb_; }
  /// Names of the steps run so far, in order.
  const std::vector<std::string>& steps() const { return steps_; }

 private:
  /// Id of the triangle geometry bound through the global descriptor table.
  const GeometryDescription* triangle_geometry() const;

  SceneDescription description_;
  FrameParameters frame_;
  std::shared_ptr<Scene> scene_;
  SceneConstantBuffer scene_cb_;
  InstanceBuffer instance_buffer_;
  std::shared_ptr<const AccelerationStructure> as_;
  std::unique_ptr<ShaderTable> shader_table_;
  std::vector<std::string> steps_;
};

}  // namespace procrt
