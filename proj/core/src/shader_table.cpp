// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/shader_table.hpp"

#include <cstring>
#include <limits>

namespace procrt {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(ErrorCode::kOutOfRange, "record address overflow");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    throw Error(ErrorCode::kOutOfRange, "record address overflow");
  }
  return a + b;
}

void put_u32(std::byte* at, std::uint32_t v) { std::memcpy(at, &v, 4); }

std::uint32_t get_u32(const std::byte* at) {
  std::uint32_t v = 0;
  std::memcpy(&v, at, 4);
  return v;
}

// One slot of the expected layout: the instance a record run belongs to.
struct InstanceSlot {
  const Geometry* geometry = nullptr;
  std::uint32_t instance_id = 0;
  std::optional<std::uint32_t> procedural_ordinal;
};

std::vector<InstanceSlot> flatten_instances(const Scene& scene) {
  std::vector<InstanceSlot> slots;
  std::uint32_t procedural = 0;
  for (const Geometry& g : scene.geometries()) {
    for (std::size_t k = 0; k < g.instances().size(); ++k) {
      InstanceSlot slot{&g, static_cast<std::uint32_t>(slots.size()), std::nullopt};
      if (g.kind() == GeometryKind::kProcedural) slot.procedural_ordinal = procedural++;
      slots.push_back(slot);
    }
  }
  return slots;
}

}  // namespace

std::uint64_t record_address(std::uint64_t start, std::uint64_t stride, std::uint64_t ray_contribution,
                             std::uint64_t geometry_multiplier, std::uint64_t geometry_contribution,
                             std::uint64_t instance_contribution) {
  if (stride == 0) throw Error(ErrorCode::kInvalidArgument, "stride h_p must be positive");
  if (geometry_multiplier == 0) throw Error(ErrorCode::kInvalidArgument, "multiplier m must be positive");
  const std::uint64_t index = checked_add(
      checked_add(ray_contribution, checked_mul(geometry_multiplier, geometry_contribution)), instance_contribution);
  return checked_add(start, checked_mul(stride, index));
}

const MissRecord& BuiltShaderTable::miss(std::uint32_t ray_contribution) const {
  if (ray_contribution >= miss_.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "miss index " + std::to_string(ray_contribution) + " >= " + std::to_string(miss_.size()));
  }
  return miss_[ray_contribution];
}

std::span<const std::byte> BuiltShaderTable::record_bytes(std::size_t index) const {
  if (index >= record_count()) {
    throw Error(ErrorCode::kOutOfRange,
                "hit-group record " + std::to_string(index) + " >= " + std::to_string(record_count()));
  }
  return std::span<const std::byte>(bytes_).subspan(index * stride_, stride_);
}

std::uint64_t BuiltShaderTable::start(AddressGranularity granularity) const {
  return granularity == AddressGranularity::kRecord ? start_records_ : start_records_ * stride_;
}

std::uint64_t BuiltShaderTable::stride(AddressGranularity granularity) const {
  return granularity == AddressGranularity::kRecord ? 1 : stride_;
}

std::size_t BuiltShaderTable::record_index(std::uint64_t address, AddressGranularity granularity) const {
  const std::uint64_t h_s = start(granularity);
  const std::uint64_t h_p = stride(granularity);
  if (address < h_s || (address - h_s) % h_p != 0) {
    throw Error(ErrorCode::kOutOfRange, "address " + std::to_string(address) + " is not a record boundary");
  }
  const std::uint64_t index = (address - h_s) / h_p;
  if (index >= record_count()) {
    throw Error(ErrorCode::kOutOfRange, "hit-group record " + std::to_string(index) + " past table end (" +
                                            std::to_string(record_count()) + " records)");
  }
  return static_cast<std::size_t>(index);
}

HitGroupRecord BuiltShaderTable::record(std::size_t index) const {
  const auto bytes = record_bytes(index);
  const auto& groups = scene_->hit_groups().items();
  const auto& signatures = scene_->local_signatures().items();
  const auto& rays = scene_->rays().items();
  const std::uint32_t group_index = get_u32(bytes.data());
  const std::uint32_t signature_index = get_u32(bytes.data() + 4);
  const std::uint32_t ray_index = get_u32(bytes.data() + 8);
  const std::uint32_t stored_tag = get_u32(bytes.data() + 12);
  const RootSignature& signature = signatures.at(signature_index);
  return HitGroupRecord{
      index, &rays.at(ray_index), &groups.at(group_index), &signature,
      RootArguments::unpack(stored_tag, signature.root_arguments_template()->tag(), bytes.subspan(kHeaderSize))};
}

ShaderTable::ShaderTable(std::shared_ptr<const Scene> scene) : scene_(std::move(scene)) {
  if (!scene_) throw Error(ErrorCode::kInvalidArgument, "shader table needs a scene");
}

std::size_t ShaderTable::record_stride() { return BuiltShaderTable::kHeaderSize + max_root_arguments_size(); }

void ShaderTable::add_ray_gen(std::string entry_point) {
  if (ray_gen_) throw Error(ErrorCode::kDuplicateRayGen, "ray generation already set to '" + *ray_gen_ + "'");
  if (entry_point.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ray generation entry point");
  ray_gen_ = std::move(entry_point);
}

void ShaderTable::add_miss(const EntityId& ray_id) {
  const RayType* ray = scene_->rays().find(ray_id);
  if (!ray) throw Error(ErrorCode::kUnknownId, "ray '" + ray_id.str() + "'");
  for (const MissRecord& m : miss_) {
    if (m.ray_id == ray_id) throw Error(ErrorCode::kDuplicateId, "miss record for '" + ray_id.str() + "'");
  }
  miss_.push_back(MissRecord{ray_id, ray->miss_shader});
}

void ShaderTable::check_entry(const ShaderTableEntry& entry) const {
  if (!scene_->contains(EntityCategory::kRay, entry.ray_id)) {
    throw Error(ErrorCode::kUnknownId, "ray '" + entry.ray_id.str() + "'");
  }
  if (!scene_->contains(EntityCategory::kHitGroup, entry.hit_group_id)) {
    throw Error(ErrorCode::kUnknownId, "hit group '" + entry.hit_group_id.str() + "'");
  }
  const RootSignature* signature = scene_->local_signatures().find(entry.local_signature_id);
  if (!signature) throw Error(ErrorCode::kUnknownId, "local signature '" + entry.local_signature_id.str() + "'");
  // Local signatures always carry a template (enforced by Scene).
  entry.root_arguments.expect_same_tag(*signature->root_arguments_template());
}

void ShaderTable::add_common_entry(ShaderTableEntry entry) {
  check_entry(entry);
  entries_.push_back(std::move(entry));
}

void ShaderTable::validate_layout() const {
  const Scene& scene = *scene_;
  const auto m = static_cast<std::uint32_t>(scene.rays().size());
  const std::vector<InstanceSlot> slots = flatten_instances(scene);
  const std::size_t expected_records = slots.size() * m;
  const std::size_t n = std::max(expected_records, entries_.size());

  for (std::size_t j = 0; j < n; ++j) {
    const auto r = static_cast<std::uint32_t>(j % m);
    const auto k = static_cast<std::uint32_t>(j / m);
    const LayoutViolation::Expected expected{r, 0, k * m};
    if (j >= entries_.size()) throw LayoutViolation(j, expected, "missing record");
    if (j >= expected_records) throw LayoutViolation(j, expected, "record past the last instance run");

    const ShaderTableEntry& e = entries_[j];
    const InstanceSlot& slot = slots[k];
    const std::uint32_t contribution = scene.ray_contribution(e.ray_id);
    if (contribution != r) {
      throw LayoutViolation(j, expected,
                            "ray '" + e.ray_id.str() + "' has contribution " + std::to_string(contribution));
    }
    const HitGroup& group = scene.hit_group(e.hit_group_id);
    const bool procedural = slot.geometry->kind() == GeometryKind::kProcedural;
    if (procedural != group.has_intersection()) {
      throw LayoutViolation(
          j, expected,
          "hit group '" + group.id.str() +
              (procedural ? "' lacks an intersection shader for procedural '" : "' has an intersection shader but '") +
              slot.geometry->id().str() + "'" + (procedural ? "" : " is a triangle mesh"));
    }
    if (procedural) {
      if (!e.root_arguments.holds<ProceduralRootArguments>()) {
        throw LayoutViolation(j, expected, "procedural record without ProceduralRootArguments");
      }
      const std::uint32_t index = e.root_arguments.as<ProceduralRootArguments>().instance.instance_index;
      if (index != *slot.procedural_ordinal) {
        throw LayoutViolation(j, expected,
                              "root arguments index instance " + std::to_string(index) +
                                  ", slot holds procedural instance " + std::to_string(*slot.procedural_ordinal));
      }
    } else if (!e.root_arguments.holds<TriangleRootArguments>()) {
      throw LayoutViolation(j, expected, "triangle record without TriangleRootArguments");
    }
  }
}

BuiltShaderTable ShaderTable::build(BuildOptions options) const {
  if (!ray_gen_) throw Error(ErrorCode::kValidationFailure, "shader table has no ray generation record");
  const Scene& scene = *scene_;
  if (miss_.size() != scene.rays().size()) {
    throw Error(ErrorCode::kValidationFailure, "shader table has " + std::to_string(miss_.size()) +
                                                   " miss records for " + std::to_string(scene.rays().size()) +
                                                   " ray types");
  }
  for (std::size_t r = 0; r < miss_.size(); ++r) {
    if (scene.ray_contribution(miss_[r].ray_id) != r) {
      throw Error(ErrorCode::kValidationFailure,
                  "miss record " + std::to_string(r) + " belongs to ray '" + miss_[r].ray_id.str() + "'");
    }
  }
  if (entries_.empty()) throw Error(ErrorCode::kValidationFailure, "shader table has no hit-group entries");
  validate_layout();

  BuiltShaderTable built;
  built.scene_ = scene_;
  built.ray_gen_ = *ray_gen_;
  built.miss_ = miss_;
  built.entries_ = entries_;
  built.stride_ = record_stride();
  built.start_records_ = options.start_records;
  built.ray_type_count_ = static_cast<std::uint32_t>(scene.rays().size());
  built.bytes_.assign(built.stride_ * entries_.size(), std::byte{0});
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    const ShaderTableEntry& e = entries_[j];
    std::byte* rec = built.bytes_.data() + j * built.stride_;
    put_u32(rec, static_cast<std::uint32_t>(*scene.hit_groups().position(e.hit_group_id)));
    put_u32(rec + 4, static_cast<std::uint32_t>(*scene.local_signatures().position(e.local_signature_id)));
    put_u32(rec + 8, scene.ray_contribution(e.ray_id));
    put_u32(rec + 12, e.root_arguments.tag());
    e.root_arguments.pack(
        std::span<std::byte>(rec + BuiltShaderTable::kHeaderSize, built.stride_ - BuiltShaderTable::kHeaderSize));
  }
  return built;
}

std::map<EntityId, EntityId> derive_export_associations(std::span<const ShaderTableEntry> entries) {
  std::map<EntityId, EntityId> associations;
  for (const ShaderTableEntry& e : entries) {
    const auto [it, inserted] = associations.emplace(e.hit_group_id, e.local_signature_id);
    if (!inserted && it->second != e.local_signature_id) {
      throw Error(ErrorCode::kConflictingAssociation, "hit group '" + e.hit_group_id.str() + "' bound to both '" +
                                                          it->second.str() + "' and '" + e.local_signature_id.str() +
                                                          "'");
    }
  }
  return associations;
}

std::map<EntityId, EntityId> derive_export_associations(const BuiltShaderTable& table) {
  return derive_export_associations(table.entries());
}

}  // namespace procrt
