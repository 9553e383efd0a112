// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procrt/compat.hpp"
#include "procrt/scene.hpp"

namespace procrt {

/// The hit-group indexing rule: h_s + h_p * (r + m * g + i).
/// Integer arithmetic; throws OutOfRange on overflow and InvalidArgument when
/// h_p or m is zero.
std::uint64_t record_address(std::uint64_t start, std::uint64_t stride, std::uint64_t ray_contribution,
                             std::uint64_t geometry_multiplier, std::uint64_t geometry_contribution,
                             std::uint64_t instance_contribution);

enum class AddressGranularity { kRecord, kByte };

/// <Ray id, Hit Group id, Local Root Signature id, Root Arguments>
struct ShaderTableEntry {
  EntityId ray_id;
  EntityId hit_group_id;
  EntityId local_signature_id;
  RootArguments root_arguments;
};

struct MissRecord {
  EntityId ray_id;
  std::string entry_point;
};

/// Decoded view of one hit-group record.
struct HitGroupRecord {
  std::size_t index = 0;
  const RayType* ray = nullptr;
  const HitGroup* hit_group = nullptr;
  const RootSignature* local_signature = nullptr;
  RootArguments root_arguments;
};

/// Output of the building pass: fixed-stride byte records plus the ray-gen
/// and miss tables.
///
/// Record layout: a 32-byte header {hit group index, local signature index,
/// ray index, root-arguments tag, 16 zero bytes} followed by the packed root
/// arguments, zero-padded to the stride.
class BuiltShaderTable {
 public:
  static constexpr std::size_t kHeaderSize = 32;

  const std::string& ray_gen() const { return ray_gen_; }
  const std::vector<MissRecord>& miss_records() const { return miss_; }
  /// Miss record for ray contribution r.
  const MissRecord& miss(std::uint32_t ray_contribution) const;

  std::size_t record_count() const { return entries_.size(); }
  std::size_t stride_bytes() const { return stride_; }
  /// Number of ray types; the m used when validating the layout.
  std::uint32_t ray_type_count() const { return ray_type_count_; }
  const std::vector<ShaderTableEntry>& entries() const { return entries_; }
  std::span<const std::byte> record_bytes(std::size_t index) const;

  /// h_s and h_p in the requested granularity.
  std::uint64_t start(AddressGranularity granularity) const;
  std::uint64_t stride(AddressGranularity granularity) const;
  /// Maps an address to a record index. OutOfRange past the end or when the
  /// address is not on a record boundary.
  std::size_t record_index(std::uint64_t address, AddressGranularity granularity) const;

  /// Decodes record `index`, reading root arguments under the local
  /// signature's declared tag (TypeMismatch if the bytes disagree).
  HitGroupRecord record(std::size_t index) const;

  const Scene& scene() const { return *scene_; }

 private:
  friend class ShaderTable;

  std::shared_ptr<const Scene> scene_;
  std::string ray_gen_;
  std::vector<MissRecord> miss_;
  std::vector<ShaderTableEntry> entries_;
  std::vector<std::byte> bytes_;
  std::size_t stride_ = 0;
  std::uint64_t start_records_ = 0;
  std::uint32_t ray_type_count_ = 0;
};

/// Two-pass shader table: entries are recorded first, then build() lays out
/// the records and checks them against the indexing rule.
class ShaderTable {
 public:
  struct BuildOptions {
    /// h_s in records; byte mode uses start_records * stride.
    std::uint64_t start_records = 0;
  };

  explicit ShaderTable(std::shared_ptr<const Scene> scene);

  void add_ray_gen(std::string entry_point);
  void add_miss(const EntityId& ray_id);
  void add_common_entry(ShaderTableEntry entry);

  const std::vector<ShaderTableEntry>& entries() const { return entries_; }

  /// Lays out fixed-stride records in entry order. Throws ValidationFailure
  /// for a missing ray-gen/miss/hit-group record and LayoutViolation when a
  /// record does not sit where the indexing rule will look for it: runs of m
  /// records per (geometry, instance) in creation order, ordered by ray
  /// contribution.
  BuiltShaderTable build(BuildOptions options) const;
  BuiltShaderTable build() const { return build(BuildOptions{}); }

  /// Record stride: header plus the largest root-arguments variant.
  static std::size_t record_stride();

 private:
  void check_entry(const ShaderTableEntry& entry) const;
  void validate_layout() const;

  std::shared_ptr<const Scene> scene_;
  std::optional<std::string> ray_gen_;
  std::vector<MissRecord> miss_;
  std::vector<ShaderTableEntry> entries_;
};

/// hit group id -> local signature id, from every entry of the table.
/// Throws ConflictingAssociation when one hit group is bound to two signatures.
std::map<EntityId, EntityId> derive_export_associations(const BuiltShaderTable& table);
std::map<EntityId, EntityId> derive_export_associations(std::span<const ShaderTableEntry> entries);

}  // namespace procrt
