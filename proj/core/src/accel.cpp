// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/accel.hpp"

#include <tuple>

namespace procrt {

std::optional<TriangleHit> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& v0, const Vec3& v1,
                                              const Vec3& v2, double t_min, double t_max) {
  // Slack on the barycentric bounds closes rounding gaps on shared edges.
  constexpr double kEdgeSlack = 1e-12;
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 p = cross(direction, e2);
  const double det = dot(e1, p);
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3 s = origin - v0;
  const double u = dot(s, p) * inv_det;
  if (u < -kEdgeSlack || u > 1.0 + kEdgeSlack) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(direction, q) * inv_det;
  if (v < -kEdgeSlack || u + v > 1.0 + kEdgeSlack) return std::nullopt;
  const double t = dot(e2, q) * inv_det;
  if (!(t >= t_min && t <= t_max)) return std::nullopt;
  return TriangleHit{t, std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0)};
}

namespace {

TriangleBlas build_triangle_blas(const TriangleMesh& mesh) {
  TriangleBlas blas;
  std::vector<Aabb> boxes;
  const std::size_t n = mesh.triangle_count();
  for (std::size_t tri = 0; tri < n; ++tri) {
    const Vec3& a = mesh.vertices[mesh.indices[3 * tri]].position;
    const Vec3& b = mesh.vertices[mesh.indices[3 * tri + 1]].position;
    const Vec3& c = mesh.vertices[mesh.indices[3 * tri + 2]].position;
    if (length(cross(b - a, c - a)) == 0.0) {
      ++blas.dropped_degenerate;
      continue;
    }
    blas.triangles.push_back({a, b, c});
    blas.primitive_ids.push_back(static_cast<std::uint32_t>(tri));
    Aabb box;
    box.expand(a);
    box.expand(b);
    box.expand(c);
    boxes.push_back(box);
  }
  blas.bvh = Bvh::build(boxes, TriangleBlas::kMaxLeafSize);
  return blas;
}

}  // namespace

AccelerationStructure AccelerationStructure::build(const Scene& scene, BuildOptions options) {
  if (scene.geometries().size() == 0) throw Error(ErrorCode::kEmptyScene, "scene has no geometry");
  AccelerationStructure as;
  as.records_per_instance_ = options.records_per_instance != 0
                                 ? options.records_per_instance
                                 : std::max<std::uint32_t>(1, static_cast<std::uint32_t>(scene.rays().size()));

  std::vector<Aabb> instance_boxes;
  for (const Geometry& geometry : scene.geometries()) {
    Blas blas;
    blas.geometry_ref = geometry.id();
    blas.kind = geometry.kind();
    if (geometry.kind() == GeometryKind::kTriangle) {
      blas.triangles = build_triangle_blas(geometry.mesh());
      blas.local_bounds = blas.triangles->bvh.bounds();
    } else {
      blas.local_bounds = geometry.aabb();
    }
    const auto blas_index = static_cast<std::uint32_t>(as.blas_.size());
    as.blas_.push_back(std::move(blas));

    for (const InstanceTransform& transform : geometry.instances()) {
      TlasInstance inst;
      inst.blas_index = blas_index;
      inst.transform = transform;
      inst.instance_id = static_cast<std::uint32_t>(as.instances_.size());
      inst.instance_contribution = inst.instance_id * as.records_per_instance_;
      inst.world_aabb = as.blas_.back().local_bounds.valid()
                            ? as.blas_.back().local_bounds.transformed(transform.local_to_world)
                            : Aabb{};
      instance_boxes.push_back(inst.world_aabb);
      as.instances_.push_back(inst);
    }
  }
  as.tlas_ = Bvh::build(instance_boxes, 1);
  return as;
}

std::size_t AccelerationStructure::dropped_degenerate_triangles() const {
  std::size_t n = 0;
  for (const Blas& b : blas_) {
    if (b.triangles) n += b.triangles->dropped_degenerate;
  }
  return n;
}

std::optional<TraversalHit> AccelerationStructure::traverse_closest(const TraversalRay& ray,
                                                                    const TraversalCallbacks& callbacks) const {
  return traverse(ray, callbacks, false);
}

bool AccelerationStructure::traverse_any(const TraversalRay& ray, const TraversalCallbacks& callbacks) const {
  return traverse(ray, callbacks, true).has_value();
}

std::optional<TraversalHit> AccelerationStructure::traverse_first(const TraversalRay& ray,
                                                                  const TraversalCallbacks& callbacks) const {
  return traverse(ray, callbacks, true);
}

std::optional<TraversalHit> AccelerationStructure::traverse(const TraversalRay& ray,
                                                            const TraversalCallbacks& callbacks, bool first_hit) const {
  std::optional<TraversalHit> best;
  double t_max = ray.t_max;
  bool done = false;

  // Equal t resolves to the lowest (instance, primitive) so results do not
  // depend on traversal order.
  auto commit = [&](TraversalHit candidate) -> bool {
    if (candidate.t > t_max) return false;
    if (best && candidate.t == best->t &&
        std::tie(candidate.instance->instance_id, candidate.primitive_index) >=
            std::tie(best->instance->instance_id, best->primitive_index)) {
      return false;
    }
    CandidateDecision decision = CandidateDecision::kAccept;
    if (callbacks.filter) decision = callbacks.filter(candidate);
    if (decision == CandidateDecision::kIgnore) return false;
    t_max = candidate.t;
    best = std::move(candidate);
    if (first_hit || decision == CandidateDecision::kAcceptAndEnd) done = true;
    return true;
  };

  const Vec3 world_inv = reciprocal(ray.direction);
  tlas_.traverse(ray.origin, world_inv, ray.t_min, t_max, [&](std::uint32_t index) {
    const TlasInstance& inst = instances_[index];
    const Blas& blas = blas_[inst.blas_index];
    const Vec3 origin = inst.transform.world_to_local.transform_point(ray.origin);
    const Vec3 direction = inst.transform.world_to_local.transform_vector(ray.direction);
    const Vec3 inv = reciprocal(direction);

    if (blas.kind == GeometryKind::kTriangle) {
      const TriangleBlas& tb = *blas.triangles;
      tb.bvh.traverse(origin, inv, ray.t_min, t_max, [&](std::uint32_t local) {
        const auto& tri = tb.triangles[local];
        const auto hit = intersect_triangle(origin, direction, tri[0], tri[1], tri[2], ray.t_min, t_max);
        if (hit) {
          commit(TraversalHit{
              hit->t, &inst, 0, tb.primitive_ids[local],
              AttributeStruct(TriangleAttributes{Float2{static_cast<float>(hit->u), static_cast<float>(hit->v)}})});
        }
        return done;
      });
      return done;
    }

    const auto span = intersect_slabs(blas.local_bounds, origin, inv, ray.t_min, t_max);
    if (!span || !callbacks.intersection) return done;
    ProceduralCandidate candidate{inst, blas, TraversalRay{origin, direction, ray.t_min, t_max}, span->first,
                                  span->second};
    HitReporter reporter(ray.t_min, t_max, [&](double t, AttributeStruct attributes) {
      if (done) return false;
      return commit(TraversalHit{t, &inst, 0, 0, std::move(attributes)});
    });
    callbacks.intersection(candidate, reporter);
    return done;
  });
  return best;
}

}  // namespace procrt
