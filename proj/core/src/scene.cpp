// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/scene.hpp"

#include <algorithm>

namespace procrt {

namespace {

std::optional<std::string> entry_point(std::string_view name) {
  if (name.empty()) return std::nullopt;
  return std::string(name);
}

[[noreturn]] void invalid_geometry(const EntityId& id, const std::string& what) {
  throw Error(ErrorCode::kValidationFailure, "geometry '" + id.str() + "': " + what);
}

}  // namespace

EntityId::EntityId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(ErrorCode::kInvalidArgument, "entity id must not be empty");
}
EntityId::EntityId(const char* value) : EntityId(std::string(value)) {}
EntityId::EntityId(std::string_view value) : EntityId(std::string(value)) {}

HitGroup::HitGroup(EntityId id_, std::string internal_name_, std::string_view any_hit_, std::string_view closest_hit_,
                   std::string_view intersection_)
    : id(std::move(id_)),
      internal_name(std::move(internal_name_)),
      any_hit(entry_point(any_hit_)),
      closest_hit(entry_point(closest_hit_)),
      intersection(entry_point(intersection_)) {}

Geometry::Geometry(EntityId id, TriangleMesh mesh, Instances instances)
    : id_(std::move(id)), shape_(std::move(mesh)), instances_(std::move(instances)) {
  validate();
}

Geometry::Geometry(EntityId id, Aabb aabb, Instances instances)
    : id_(std::move(id)), shape_(ProceduralBox{aabb}), instances_(std::move(instances)) {
  validate();
}

const TriangleMesh& Geometry::mesh() const {
  if (const auto* m = std::get_if<TriangleMesh>(&shape_)) return *m;
  throw Error(ErrorCode::kTypeMismatch, "geometry '" + id_.str() + "' is procedural");
}

const Aabb& Geometry::aabb() const {
  if (const auto* b = std::get_if<ProceduralBox>(&shape_)) return b->aabb;
  throw Error(ErrorCode::kTypeMismatch, "geometry '" + id_.str() + "' is a triangle mesh");
}

Aabb Geometry::local_bounds() const {
  if (kind() == GeometryKind::kProcedural) return aabb();
  Aabb box;
  for (const Vertex& v : mesh().vertices) box.expand(v.position);
  return box;
}

void Geometry::validate() const {
  if (instances_.empty()) invalid_geometry(id_, "needs at least one instance");
  for (const InstanceTransform& t : instances_) {
    if (!t.consistent()) invalid_geometry(id_, "instance matrices are not inverses");
  }
  if (kind() == GeometryKind::kTriangle) {
    const TriangleMesh& m = mesh();
    if (m.indices.empty() || m.indices.size() % 3 != 0) {
      invalid_geometry(id_, "index count must be a positive multiple of 3");
    }
    for (std::uint32_t idx : m.indices) {
      if (idx >= m.vertices.size()) invalid_geometry(id_, "index out of vertex range");
    }
  } else if (!aabb().strictly_positive_extent()) {
    invalid_geometry(id_, "aabb min must be < max componentwise");
  }
}

std::string_view to_string(ViewKind kind) {
  switch (kind) {
    case ViewKind::kCbv:
      return "CBV";
    case ViewKind::kSrv:
      return "SRV";
    case ViewKind::kUav:
      return "UAV";
  }
  return "?";
}

RootSignature::RootSignature(EntityId id, SignatureScope scope) : id_(std::move(id)), scope_(scope) {}

void RootSignature::claim(Register reg) {
  if (std::find(used_.begin(), used_.end(), reg) != used_.end()) {
    throw Error(ErrorCode::kValidationFailure, "signature '" + id_.str() + "' register " +
                                                   std::string(to_string(reg.view)) + std::to_string(reg.slot) +
                                                   " bound twice");
  }
  used_.push_back(reg);
}

void RootSignature::add_constant(RootComponent component, std::uint32_t slot) {
  claim({ViewKind::kCbv, slot});
  entries_.emplace_back(InlineConstant{std::move(component), slot});
}

void RootSignature::add_descriptor(RootComponent component, ViewKind view, std::uint32_t slot) {
  claim({view, slot});
  entries_.emplace_back(InlineDescriptor{std::move(component), view, slot});
}

std::size_t RootSignature::add_descriptor_table(std::vector<DescriptorRange> ranges) {
  for (const DescriptorRange& r : ranges) {
    if (r.count == 0) throw Error(ErrorCode::kValidationFailure, "empty descriptor range");
    for (std::uint32_t s = 0; s < r.count; ++s) claim({r.view, r.base_slot + s});
  }
  entries_.emplace_back(DescriptorTable{std::move(ranges)});
  return entries_.size() - 1;
}

void RootSignature::set_root_arguments_type(RootArguments prototype) {
  if (scope_ != SignatureScope::kLocal) {
    throw Error(ErrorCode::kValidationFailure, "global signature '" + id_.str() + "' cannot carry root arguments");
  }
  root_arguments_ = std::move(prototype);
}

const RootComponent& RootSignature::component(Register reg) const {
  for (const SignatureEntry& e : entries_) {
    if (const auto* c = std::get_if<InlineConstant>(&e)) {
      if (reg == Register{ViewKind::kCbv, c->slot}) return c->component;
    } else if (const auto* d = std::get_if<InlineDescriptor>(&e)) {
      if (reg == Register{d->view, d->slot}) return d->component;
    }
  }
  throw Error(ErrorCode::kNotFound, "no inline component at " + std::string(to_string(reg.view)) +
                                        std::to_string(reg.slot) + " in '" + id_.str() + "'");
}

const DescriptorRange& RootSignature::range(Register reg) const {
  for (const SignatureEntry& e : entries_) {
    if (const auto* t = std::get_if<DescriptorTable>(&e)) {
      for (const DescriptorRange& r : t->ranges) {
        if (r.view == reg.view && reg.slot >= r.base_slot && reg.slot < r.base_slot + r.count) {
          return r;
        }
      }
    }
  }
  throw Error(ErrorCode::kNotFound, "no descriptor range at " + std::string(to_string(reg.view)) +
                                        std::to_string(reg.slot) + " in '" + id_.str() + "'");
}

void Scene::check_mutable() const {
  if (frozen_) throw Error(ErrorCode::kSceneFrozen, "scene is frozen");
}

void Scene::add_ray(RayType ray) {
  check_mutable();
  const EntityId id = ray.id;
  rays_.add(std::move(ray), id, "ray");
}

void Scene::add_hit_group(HitGroup group) {
  check_mutable();
  const EntityId id = group.id;
  hit_groups_.add(std::move(group), id, "hit group");
}

void Scene::add_geometry(Geometry geometry) {
  check_mutable();
  if (geometry_frozen_) throw Error(ErrorCode::kSceneFrozen, "geometry is frozen");
  const EntityId id = geometry.id();
  geometries_.add(std::move(geometry), id, "geometry");
}

void Scene::add_global_signature(RootSignature signature) {
  check_mutable();
  if (signature.scope() != SignatureScope::kGlobal) {
    throw Error(ErrorCode::kValidationFailure, "'" + signature.id().str() + "' is not global");
  }
  const EntityId id = signature.id();
  global_signatures_.add(std::move(signature), id, "global signature");
}

void Scene::add_local_signature(RootSignature signature) {
  check_mutable();
  if (signature.scope() != SignatureScope::kLocal) {
    throw Error(ErrorCode::kValidationFailure, "'" + signature.id().str() + "' is not local");
  }
  if (!signature.root_arguments_template()) {
    throw Error(ErrorCode::kValidationFailure,
                "local signature '" + signature.id().str() + "' has no root arguments type");
  }
  const EntityId id = signature.id();
  local_signatures_.add(std::move(signature), id, "local signature");
}

bool Scene::contains(EntityCategory category, const EntityId& id) const {
  switch (category) {
    case EntityCategory::kRay:
      return rays_.find(id) != nullptr;
    case EntityCategory::kHitGroup:
      return hit_groups_.find(id) != nullptr;
    case EntityCategory::kGeometry:
      return geometries_.find(id) != nullptr;
    case EntityCategory::kGlobalSignature:
      return global_signatures_.find(id) != nullptr;
    case EntityCategory::kLocalSignature:
      return local_signatures_.find(id) != nullptr;
  }
  return false;
}

std::uint32_t Scene::ray_contribution(const EntityId& ray_id) const {
  const auto pos = rays_.position(ray_id);
  if (!pos) throw Error(ErrorCode::kUnknownId, "ray '" + ray_id.str() + "'");
  return static_cast<std::uint32_t>(*pos);
}

std::size_t Scene::instance_count() const {
  std::size_t n = 0;
  for (const Geometry& g : geometries_) n += g.instances().size();
  return n;
}

std::size_t Scene::procedural_instance_count() const {
  std::size_t n = 0;
  for (const Geometry& g : geometries_) {
    if (g.kind() == GeometryKind::kProcedural) n += g.instances().size();
  }
  return n;
}

InstanceBuffer build_instance_buffer(const Scene& scene) {
  auto transforms = std::make_shared<std::vector<InstanceTransform>>();
  transforms->reserve(scene.procedural_instance_count());
  for (const Geometry& g : scene.geometries()) {
    if (g.kind() != GeometryKind::kProcedural) continue;
    for (const InstanceTransform& t : g.instances()) transforms->push_back(t);
  }
  return InstanceBuffer{std::move(transforms)};
}

}  // namespace procrt
