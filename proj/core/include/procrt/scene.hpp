// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "procrt/compat.hpp"
#include "procrt/error.hpp"
#include "procrt/math.hpp"
#include "procrt/transform.hpp"

namespace procrt {

/// Non-empty entity name, unique within its category.
class EntityId {
 public:
  EntityId() = default;
  EntityId(std::string value);       // NOLINT(google-explicit-constructor)
  EntityId(const char* value);       // NOLINT(google-explicit-constructor)
  EntityId(std::string_view value);  // NOLINT(google-explicit-constructor)

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend bool operator==(const EntityId&, const EntityId&) = default;
  friend auto operator<=>(const EntityId&, const EntityId&) = default;

 private:
  std::string value_;
};

struct RayType {
  EntityId id;
  std::string miss_shader;
  Payload payload_template;
};

/// Absent entry points are std::nullopt. An empty string passed to the
/// constructor means "no shader", mirroring the string-based wiring.
struct HitGroup {
  HitGroup(EntityId id, std::string internal_name, std::string_view any_hit, std::string_view closest_hit,
           std::string_view intersection);

  EntityId id;
  std::string internal_name;
  std::optional<std::string> any_hit;
  std::optional<std::string> closest_hit;
  std::optional<std::string> intersection;

  bool has_intersection() const { return intersection.has_value(); }
};

struct Vertex {
  Vec3 position;
  Vec3 normal;
};

struct TriangleMesh {
  std::vector<Vertex> vertices;
  std::vector<std::uint32_t> indices;

  std::size_t triangle_count() const { return indices.size() / 3; }
};

struct ProceduralBox {
  Aabb aabb;  // local space
};

enum class GeometryKind { kTriangle, kProcedural };

class Geometry {
 public:
  using Instances = std::vector<InstanceTransform>;

  /// Throws ValidationFailure when the shape or instances break their invariants.
  Geometry(EntityId id, TriangleMesh mesh, Instances instances);
  Geometry(EntityId id, Aabb aabb, Instances instances);

  const EntityId& id() const { return id_; }
  GeometryKind kind() const {
    return std::holds_alternative<TriangleMesh>(shape_) ? GeometryKind::kTriangle : GeometryKind::kProcedural;
  }
  const TriangleMesh& mesh() const;
  const Aabb& aabb() const;
  const Instances& instances() const { return instances_; }
  /// Local-space bounds of the geometry.
  Aabb local_bounds() const;

 private:
  void validate() const;

  EntityId id_;
  std::variant<TriangleMesh, ProceduralBox> shape_;
  Instances instances_;
};

enum class SignatureScope { kGlobal, kLocal };
enum class ViewKind { kCbv, kSrv, kUav };

std::string_view to_string(ViewKind kind);

struct Register {
  ViewKind view = ViewKind::kCbv;
  std::uint32_t slot = 0;
  friend bool operator==(const Register&, const Register&) = default;
};

struct InlineConstant {
  RootComponent component;
  std::uint32_t slot = 0;
};

struct InlineDescriptor {
  RootComponent component;
  ViewKind view = ViewKind::kSrv;
  std::uint32_t slot = 0;
};

/// Consecutive registers [base_slot, base_slot + count) bound to a named
/// resource. Triangle geometry buffers are named by their geometry id.
struct DescriptorRange {
  std::string resource;
  ViewKind view = ViewKind::kSrv;
  std::uint32_t base_slot = 0;
  std::uint32_t count = 1;
};

struct DescriptorTable {
  std::vector<DescriptorRange> ranges;
};

using SignatureEntry = std::variant<InlineConstant, InlineDescriptor, DescriptorTable>;

class RootSignature {
 public:
  RootSignature(EntityId id, SignatureScope scope);

  const EntityId& id() const { return id_; }
  SignatureScope scope() const { return scope_; }
  const std::vector<SignatureEntry>& entries() const { return entries_; }

  /// Each add_* throws ValidationFailure when a register is already taken.
  void add_constant(RootComponent component, std::uint32_t slot);
  void add_descriptor(RootComponent component, ViewKind view, std::uint32_t slot);
  /// Returns the entry index of the table.
  std::size_t add_descriptor_table(std::vector<DescriptorRange> ranges);

  /// Local signatures only.
  void set_root_arguments_type(RootArguments prototype);
  const std::optional<RootArguments>& root_arguments_template() const { return root_arguments_; }

  /// Component bound inline at reg; NotFound otherwise.
  const RootComponent& component(Register reg) const;
  /// Descriptor range covering reg; NotFound otherwise.
  const DescriptorRange& range(Register reg) const;

 private:
  void claim(Register reg);

  EntityId id_;
  SignatureScope scope_;
  std::vector<SignatureEntry> entries_;
  std::vector<Register> used_;
  std::optional<RootArguments> root_arguments_;
};

/// Insertion-ordered map with O(1) lookup by id.
template <typename T>
class EntityRegistry {
 public:
  void add(T value, const EntityId& id, std::string_view category) {
    if (index_.contains(id.str())) {
      throw Error(ErrorCode::kDuplicateId, std::string(category) + " '" + id.str() + "'");
    }
    index_.emplace(id.str(), items_.size());
    items_.push_back(std::move(value));
  }

  const T* find(const EntityId& id) const {
    const auto it = index_.find(id.str());
    return it == index_.end() ? nullptr : &items_[it->second];
  }

  std::optional<std::size_t> position(const EntityId& id) const {
    const auto it = index_.find(id.str());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const T& get(const EntityId& id, std::string_view category) const {
    if (const T* p = find(id)) return *p;
    throw Error(ErrorCode::kNotFound, std::string(category) + " '" + id.str() + "'");
  }

  const std::vector<T>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<T> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class EntityCategory { kRay, kHitGroup, kGeometry, kGlobalSignature, kLocalSignature };

/// Id-keyed registry of every scene entity. Mutable during construction,
/// read-only after freeze().
class Scene {
 public:
  void add_ray(RayType ray);
  void add_hit_group(HitGroup group);
  void add_geometry(Geometry geometry);
  void add_global_signature(RootSignature signature);
  void add_local_signature(RootSignature signature);

  const RayType& ray(const EntityId& id) const { return rays_.get(id, "ray"); }
  const HitGroup& hit_group(const EntityId& id) const { return hit_groups_.get(id, "hit group"); }
  const Geometry& geometry(const EntityId& id) const { return geometries_.get(id, "geometry"); }
  const RootSignature& global_signature(const EntityId& id) const {
    return global_signatures_.get(id, "global signature");
  }
  const RootSignature& local_signature(const EntityId& id) const {
    return local_signatures_.get(id, "local signature");
  }

  bool contains(EntityCategory category, const EntityId& id) const;

  /// Ray contribution r of a ray type: its position in creation order.
  std::uint32_t ray_contribution(const EntityId& ray_id) const;

  const EntityRegistry<RayType>& rays() const { return rays_; }
  const EntityRegistry<HitGroup>& hit_groups() const { return hit_groups_; }
  const EntityRegistry<Geometry>& geometries() const { return geometries_; }
  const EntityRegistry<RootSignature>& global_signatures() const { return global_signatures_; }
  const EntityRegistry<RootSignature>& local_signatures() const { return local_signatures_; }

  std::size_t instance_count() const;
  std::size_t procedural_instance_count() const;

  /// Blocks further geometry; called before acceleration-structure builds.
  void freeze_geometry() { geometry_frozen_ = true; }
  bool geometry_frozen() const { return geometry_frozen_ || frozen_; }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  void check_mutable() const;

  EntityRegistry<RayType> rays_;
  EntityRegistry<HitGroup> hit_groups_;
  EntityRegistry<Geometry> geometries_;
  EntityRegistry<RootSignature> global_signatures_;
  EntityRegistry<RootSignature> local_signatures_;
  bool geometry_frozen_ = false;
  bool frozen_ = false;
};

/// One element per procedural instance, in (geometry creation order,
/// instance creation order). Triangle instances are excluded.
InstanceBuffer build_instance_buffer(const Scene& scene);

}  // namespace procrt

template <>
struct std::hash<procrt::EntityId> {
  std::size_t operator()(const procrt::EntityId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
