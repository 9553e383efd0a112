// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "procrt/accel.hpp"
#include "procrt/compat.hpp"
#include "procrt/image.hpp"
#include "procrt/scene.hpp"
#include "procrt/shader_table.hpp"

namespace procrt {

class Pipeline;

/// Resources visible to every shader, resolved through the global root signature.
class GlobalResources {
 public:
  GlobalResources(const Scene& scene, const RootSignature& signature,
                  const AccelerationStructure& acceleration_structure)
      : scene_(&scene), signature_(&signature), as_(&acceleration_structure) {}

  /// Inline component bound at reg, checked against T (TypeMismatch).
  template <typename T>
  const T& component(Register reg) const {
    return signature_->component(reg).as<T>();
  }

  /// Geometry whose buffers a descriptor range binds at reg.
  const Geometry& geometry_buffers(Register reg) const { return scene_->geometry(signature_->range(reg).resource); }

  const AccelerationStructure& acceleration_structure() const { return *as_; }
  const RootSignature& signature() const { return *signature_; }

 private:
  const Scene* scene_;
  const RootSignature* signature_;
  const AccelerationStructure* as_;
};

enum RayFlags : std::uint32_t {
  kRayFlagNone = 0,
  kRayFlagAcceptFirstHitAndEndSearch = 1u << 0,
};

/// Per-trace parameters: r and m as set by the calling shader, the ray window,
/// and the recursion depth of the new ray (0 for rays launched by ray-gen).
struct TraceContext {
  TraversalRay ray;
  std::uint32_t ray_contribution = 0;
  std::uint32_t geometry_multiplier = 1;
  std::uint32_t recursion_depth = 0;
  std::uint32_t flags = kRayFlagNone;
};

/// What hit and miss shaders can ask about the ray that invoked them.
struct RayContext {
  TraversalRay world_ray;
  double hit_t = 0.0;
  std::uint32_t ray_contribution = 0;
  std::uint32_t geometry_multiplier = 1;
  std::uint32_t recursion_depth = 0;
  const TlasInstance* instance = nullptr;  // null for miss shaders
  std::uint32_t primitive_index = 0;
  std::size_t record_index = 0;

  Vec3 world_hit_point() const { return world_ray.origin + world_ray.direction * hit_t; }
};

/// Handle shaders use to launch rays. Tracks the recursion depth of the caller.
class Tracer {
 public:
  Tracer(const Pipeline& pipeline, std::uint32_t depth) : pipeline_(&pipeline), depth_(depth) {}

  /// Traces with this handle's depth; the depth field of ctx is overwritten.
  void trace(TraceContext ctx, Payload& payload) const;
  std::uint32_t depth() const { return depth_; }

 private:
  const Pipeline* pipeline_;
  std::uint32_t depth_;
};

struct PixelCoord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

/// Ray in the local space of a procedural instance, clipped to its AABB.
struct LocalRay {
  Vec3 origin;
  Vec3 direction;
  double t_enter = 0.0;
  double t_exit = 0.0;
};

using RayGenShader = std::function<Rgba(const PixelCoord&, const GlobalResources&, const Tracer&)>;
using MissShader = std::function<void(Payload&, const RayContext&)>;
using IntersectionShader =
    std::function<void(const LocalRay&, const RootArguments&, const GlobalResources&, HitReporter&)>;
using AnyHitShader = std::function<CandidateDecision(Payload&, const AttributeStruct&, const RootArguments&)>;
using ClosestHitShader = std::function<void(Payload&, const AttributeStruct&, const RayContext&, const RootArguments&,
                                            const GlobalResources&, const Tracer&)>;

enum class ShaderKind { kRayGen, kMiss, kIntersection, kAnyHit, kClosestHit };

/// Host functions keyed by entry-point name, one map per shader kind.
class ShaderRegistry {
 public:
  void add_ray_gen(std::string name, RayGenShader fn);
  void add_miss(std::string name, MissShader fn);
  void add_intersection(std::string name, IntersectionShader fn);
  void add_any_hit(std::string name, AnyHitShader fn);
  void add_closest_hit(std::string name, ClosestHitShader fn);

  const RayGenShader* ray_gen(const std::string& name) const { return find(ray_gen_, name); }
  const MissShader* miss(const std::string& name) const { return find(miss_, name); }
  const IntersectionShader* intersection(const std::string& name) const { return find(intersection_, name); }
  const AnyHitShader* any_hit(const std::string& name) const { return find(any_hit_, name); }
  const ClosestHitShader* closest_hit(const std::string& name) const { return find(closest_hit_, name); }

  bool contains(ShaderKind kind, const std::string& name) const;

 private:
  template <typename Fn>
  static const Fn* find(const std::unordered_map<std::string, Fn>& map, const std::string& name) {
    const auto it = map.find(name);
    return it == map.end() ? nullptr : &it->second;
  }
  template <typename Fn>
  static void insert(std::unordered_map<std::string, Fn>& map, std::string name, Fn fn);

  std::unordered_map<std::string, RayGenShader> ray_gen_;
  std::unordered_map<std::string, MissShader> miss_;
  std::unordered_map<std::string, IntersectionShader> intersection_;
  std::unordered_map<std::string, AnyHitShader> any_hit_;
  std::unordered_map<std::string, ClosestHitShader> closest_hit_;
};

enum class RecursionPolicy {
  kInvokeMiss,  // rays past the limit behave as misses
  kThrow,       // raise RecursionLimit
};

/// Observer called just before a shader runs. For hit-group shaders index is
/// the record index; for miss shaders it is the ray contribution.
using ShaderInvocationHook = std::function<void(ShaderKind kind, std::size_t index, const std::string& entry_point)>;

struct PipelineConfig {
  EntityId global_signature;
  ShaderInvocationHook on_invoke;
  std::uint32_t max_recursion = kMaxRecursion;
  RecursionPolicy recursion_policy = RecursionPolicy::kInvokeMiss;
  AddressGranularity granularity = AddressGranularity::kRecord;
};

struct PipelineStats {
  std::uint64_t rays_traced = 0;
  std::uint64_t intersection_invocations = 0;
  std::uint64_t closest_hit_invocations = 0;
  std::uint64_t miss_invocations = 0;
};

/// The resolved ray-tracing pipeline: scene, acceleration structure, built
/// shader table, and shader registry, validated together.
class Pipeline {
 public:
  /// Throws ValidationFailure when an entry point does not resolve, a
  /// hit-group kind disagrees with its role, or the pieces were built for
  /// different scenes; ConflictingAssociation from export derivation.
  Pipeline(std::shared_ptr<const Scene> scene, std::shared_ptr<const AccelerationStructure> as,
           std::shared_ptr<const BuiltShaderTable> table, ShaderRegistry registry, PipelineConfig config);

  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  /// Runs ray-gen once per pixel over 16x16 tiles. threads = 0 uses the
  /// hardware concurrency. Output is independent of the thread count.
  /// Shader exceptions abort the dispatch with a ShaderFault naming the
  /// lowest failing pixel seen before the abort.
  Image dispatch_rays(std::uint32_t width, std::uint32_t height, unsigned threads = 1) const;

  /// Traverses and runs the hit/miss shaders that the indexing rule selects.
  void trace_ray(const TraceContext& ctx, Payload& payload) const;

  /// Hit-group record index the indexing rule selects for (r, m, g, i).
  std::size_t resolve_record(std::uint32_t ray_contribution, std::uint32_t geometry_multiplier,
                             std::uint32_t geometry_contribution, std::uint32_t instance_contribution) const;

  const std::map<EntityId, EntityId>& export_associations() const { return associations_; }
  const GlobalResources& globals() const { return globals_; }
  const Scene& scene() const { return *scene_; }
  const AccelerationStructure& acceleration_structure() const { return *as_; }
  const BuiltShaderTable& shader_table() const { return *table_; }
  const PipelineConfig& config() const { return config_; }

  PipelineStats stats() const;
  void reset_stats() const;

 private:
  struct ResolvedRecord {
    const IntersectionShader* intersection = nullptr;
    const AnyHitShader* any_hit = nullptr;
    const ClosestHitShader* closest_hit = nullptr;
  };

  void validate();
  void run_miss(const TraceContext& ctx, Payload& payload) const;

  std::shared_ptr<const Scene> scene_;
  std::shared_ptr<const AccelerationStructure> as_;
  std::shared_ptr<const BuiltShaderTable> table_;
  ShaderRegistry registry_;
  PipelineConfig config_;
  GlobalResources globals_;
  std::map<EntityId, EntityId> associations_;
  std::vector<ResolvedRecord> resolved_;
  std::vector<const MissShader*> miss_shaders_;
  const RayGenShader* ray_gen_ = nullptr;

  mutable std::atomic<std::uint64_t> rays_traced_{0};
  mutable std::atomic<std::uint64_t> intersection_calls_{0};
  mutable std::atomic<std::uint64_t> closest_hit_calls_{0};
  mutable std::atomic<std::uint64_t> miss_calls_{0};
};

}  // namespace procrt
