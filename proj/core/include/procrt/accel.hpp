// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "procrt/bvh.hpp"
#include "procrt/compat.hpp"
#include "procrt/scene.hpp"

namespace procrt {

struct TraversalRay {
  Vec3 origin;
  Vec3 direction;
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
};

struct TriangleHit {
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Möller–Trumbore, two-sided. Accepts t in [t_min, t_max].
std::optional<TriangleHit> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& v0, const Vec3& v1,
                                              const Vec3& v2, double t_min, double t_max);

/// Triangle BLAS: BVH over the non-degenerate triangles of one mesh.
struct TriangleBlas {
  std::vector<std::array<Vec3, 3>> triangles;
  std::vector<std::uint32_t> primitive_ids;  // mesh triangle index of each entry above
  Bvh bvh;
  std::size_t dropped_degenerate = 0;

  static constexpr std::uint32_t kMaxLeafSize = 4;
};

struct Blas {
  EntityId geometry_ref;
  GeometryKind kind = GeometryKind::kTriangle;
  Aabb local_bounds;
  std::optional<TriangleBlas> triangles;  // set for triangle geometry
};

struct TlasInstance {
  std::uint32_t blas_index = 0;
  InstanceTransform transform;
  /// Sequential index in instance creation order.
  std::uint32_t instance_id = 0;
  /// The i term of the indexing rule: the record offset of this instance's
  /// hit-group run, instance_id * records_per_instance.
  std::uint32_t instance_contribution = 0;
  Aabb world_aabb;
};

struct TraversalHit {
  double t = 0.0;
  const TlasInstance* instance = nullptr;
  std::uint32_t geometry_index = 0;
  std::uint32_t primitive_index = 0;
  AttributeStruct attributes;
};

enum class CandidateDecision { kAccept, kIgnore, kAcceptAndEnd };

/// Handed to procedural intersection callbacks. Hits outside the current
/// [t_min, t_max] window are rejected.
class HitReporter {
 public:
  using Commit = std::function<bool(double t, AttributeStruct attributes)>;

  HitReporter(double t_min, const double& t_max, Commit commit)
      : t_min_(t_min), t_max_(t_max), commit_(std::move(commit)) {}

  /// Returns true when the hit was accepted.
  bool report(double t, AttributeStruct attributes) {
    if (!(t >= t_min_ && t <= t_max_)) return false;
    return commit_(t, std::move(attributes));
  }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

 private:
  double t_min_;
  const double& t_max_;
  Commit commit_;
};

/// A procedural BLAS entered by the ray. local_ray is in the instance's local
/// space (same parameterisation as the world ray); [t_enter, t_exit] is the
/// AABB overlap clamped to the current ray window.
struct ProceduralCandidate {
  const TlasInstance& instance;
  const Blas& blas;
  TraversalRay local_ray;
  double t_enter = 0.0;
  double t_exit = 0.0;
};

using IntersectionCallback = std::function<void(const ProceduralCandidate&, HitReporter&)>;
using CandidateFilter = std::function<CandidateDecision(const TraversalHit&)>;

struct TraversalCallbacks {
  IntersectionCallback intersection;  // may be empty when the scene has no procedurals
  CandidateFilter filter;             // optional any-hit hook
};

class AccelerationStructure {
 public:
  struct BuildOptions {
    /// Records per instance in the hit-group table; 0 means the scene's ray type count.
    std::uint32_t records_per_instance = 0;
  };

  /// One BLAS per geometry in creation order; TLAS instances flattened in
  /// (geometry, instance) order. Throws EmptyScene for a scene without geometry.
  static AccelerationStructure build(const Scene& scene, BuildOptions options);
  static AccelerationStructure build(const Scene& scene) { return build(scene, BuildOptions{}); }

  const std::vector<Blas>& blas() const { return blas_; }
  const std::vector<TlasInstance>& instances() const { return instances_; }
  const Bvh& tlas() const { return tlas_; }
  std::size_t dropped_degenerate_triangles() const;
  std::uint32_t records_per_instance() const { return records_per_instance_; }

  std::optional<TraversalHit> traverse_closest(const TraversalRay& ray, const TraversalCallbacks& callbacks) const;
  /// True iff any accepted intersection exists; stops at the first one.
  bool traverse_any(const TraversalRay& ray, const TraversalCallbacks& callbacks) const;
  /// First accepted intersection in traversal order (not necessarily closest).
  std::optional<TraversalHit> traverse_first(const TraversalRay& ray, const TraversalCallbacks& callbacks) const;

 private:
  std::optional<TraversalHit> traverse(const TraversalRay& ray, const TraversalCallbacks& callbacks,
                                       bool first_hit) const;

  std::vector<Blas> blas_;
  std::vector<TlasInstance> instances_;
  Bvh tlas_;
  std::uint32_t records_per_instance_ = 1;
};

}  // namespace procrt
