// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <limits>
#include <set>

#include "procrt/shader_table.hpp"
#include "test_util.hpp"

namespace procrt {
namespace {

using testing::error_code_of;
using testing::Rng;

// Scene of the sample with one Pac-man, built up to (not including) the table entries.
std::unique_ptr<SampleSceneBuilder> sample_without_entries(std::size_t pacmen = 1) {
  SceneDescription desc = default_scene_description();
  for (GeometryDescription& g : desc.geometries) {
    if (g.id == "Pacman") g.instances.resize(pacmen, g.instances.front());
  }
  auto b = std::make_unique<SampleSceneBuilder>(desc, FrameParameters{});
  b->build_rays();
  b->build_hit_groups();
  b->build_geometry();
  b->build_constant_buffers();
  b->build_instance_buffer();
  b->build_acceleration_structure();
  b->build_root_signatures();
  return b;
}

// Expected entries in sample loop order, written out independently of the builder.
std::vector<ShaderTableEntry> reference_entries(const SceneDescription& desc) {
  std::vector<ShaderTableEntry> out;
  std::uint32_t k = 0;
  for (const GeometryDescription& g : desc.geometries) {
    for (std::size_t n = 0; n < g.instances.size(); ++n) {
      if (g.kind == GeometryKind::kTriangle) {
        out.push_back({"Radiance", "Triangle", "Triangle", TriangleRootArguments{g.material}});
        out.push_back({"Shadow", "Triangle_Shadow", "Triangle", TriangleRootArguments{g.material}});
      } else {
        ProceduralRootArguments args{g.material, {g.primitive, k++}};
        out.push_back({"Radiance", g.id, "Procedural", args});
        out.push_back({"Shadow", g.id + "_Shadow", "Procedural", args});
      }
    }
  }
  return out;
}

ShaderTable reference_table(const SampleSceneBuilder& b) {
  ShaderTable table(b.scene());
  table.add_ray_gen("Raygen");
  table.add_miss("Radiance");
  table.add_miss("Shadow");
  for (ShaderTableEntry& e : reference_entries(b.description())) table.add_common_entry(e);
  return table;
}

TEST(RecordAddressTest, WorkedExamples) {
  // T1 radiance: r=0, m=2, g=1, i=0.
  EXPECT_EQ(record_address(0, 1, 0, 2, 1, 0), 2u);
  // Shadow ray on the second procedural instance with i=1 taken literally.
  EXPECT_EQ(record_address(0, 1, 1, 2, 0, 1), 2u);
  EXPECT_EQ(record_address(17, 5, 0, 3, 0, 0), 17u);
  EXPECT_EQ(record_address(100, 64, 1, 2, 1, 4), 100u + 64u * 7u);
}

TEST(RecordAddressTest, Errors) {
  EXPECT_EQ(error_code_of([] { record_address(0, 0, 0, 1, 0, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([] { record_address(0, 1, 0, 0, 0, 0); }), ErrorCode::kInvalidArgument);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  EXPECT_EQ(error_code_of([] { record_address(0, 2, 0, 1, 0, kMax / 2 + 1); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(error_code_of([] { record_address(kMax, 1, 0, 1, 0, 1); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(error_code_of([] { record_address(0, 1, 0, kMax, 2, 0); }), ErrorCode::kOutOfRange);
}

TEST(RecordAddressTest, StrictlyMonotoneInEachArgument) {
  Rng rng(3);
  for (int n = 0; n < 2000; ++n) {
    std::array<std::uint64_t, 6> a = {
        static_cast<std::uint64_t>(rng.integer(0, 1000)), static_cast<std::uint64_t>(rng.integer(1, 64)),
        static_cast<std::uint64_t>(rng.integer(0, 8)),    static_cast<std::uint64_t>(rng.integer(1, 8)),
        static_cast<std::uint64_t>(rng.integer(0, 8)),    static_cast<std::uint64_t>(rng.integer(0, 100))};
    auto eval = [](const std::array<std::uint64_t, 6>& v) {
      return record_address(v[0], v[1], v[2], v[3], v[4], v[5]);
    };
    const std::uint64_t base = eval(a);
    EXPECT_EQ(base, a[0] + a[1] * (a[2] + a[3] * a[4] + a[5]));
    for (int k = 0; k < 6; ++k) {
      auto bumped = a;
      ++bumped[k];
      // m and h_p only matter when their multiplicand is non-zero.
      if (k == 3 && a[4] == 0) {
        EXPECT_EQ(eval(bumped), base);
        continue;
      }
      if (k == 1 && a[2] + a[3] * a[4] + a[5] == 0) {
        EXPECT_EQ(eval(bumped), base);
        continue;
      }
      EXPECT_GT(eval(bumped), base) << "argument " << k;
    }
  }
}

TEST(RecordAddressTest, TwoTriangleGeometriesAndTwoProceduralInstances) {
  // Triangle BLAS with g = 0, 1 (one instance); procedural BLAS with g = 0 and two instances.
  const std::uint64_t m = 2;
  struct Tuple {
    char kind;
    std::uint64_t g, i;
  };
  const std::vector<Tuple> tuples = {{'T', 0, 0}, {'T', 1, 0}, {'P', 0, 0}, {'P', 0, 1}};

  // Per-BLAS sub-table bases: procedural records start after the 4 triangle records,
  // and i advances by m per instance.
  std::set<std::uint64_t> sub_table;
  for (std::uint64_t r = 0; r < m; ++r) {
    for (const Tuple& t : tuples) {
      const std::uint64_t base = t.kind == 'T' ? 0 : 4;
      sub_table.insert(record_address(base, 1, r, m, t.g, t.i * m));
    }
  }
  EXPECT_EQ(sub_table, (std::set<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7}));

  // Global sequential i under one-geometry-per-BLAS: four instances, g = 0.
  std::set<std::uint64_t> global;
  for (std::uint64_t r = 0; r < m; ++r) {
    for (std::uint64_t id = 0; id < 4; ++id) global.insert(record_address(0, 1, r, m, 0, id * m));
  }
  EXPECT_EQ(global, sub_table);

  // With unscaled i the second instance's radiance record lands on the first's shadow record.
  EXPECT_EQ(record_address(4, 1, 0, m, 0, 1), record_address(4, 1, 1, m, 0, 0));
}

TEST(ShaderTableTest, MissRecordsFollowAddOrder) {
  auto b = sample_without_entries();
  ShaderTable table(b->scene());
  table.add_ray_gen("Raygen");
  EXPECT_EQ(error_code_of([&] { table.add_ray_gen("Raygen"); }), ErrorCode::kDuplicateRayGen);
  table.add_miss("Radiance");
  table.add_miss("Shadow");
  EXPECT_EQ(error_code_of([&] { table.add_miss("Nope"); }), ErrorCode::kUnknownId);
  for (ShaderTableEntry& e : reference_entries(b->description())) table.add_common_entry(e);
  const BuiltShaderTable built = table.build();
  EXPECT_EQ(built.miss(1).ray_id, EntityId("Shadow"));
  EXPECT_EQ(built.miss(1).entry_point, "Miss_Shadow");
  EXPECT_EQ(built.miss(0).entry_point, "Miss");
  EXPECT_EQ(error_code_of([&] { (void)built.miss(2); }), ErrorCode::kOutOfRange);
}

TEST(ShaderTableTest, ReferenceEntriesForSingleInstanceProcedurals) {
  auto b = sample_without_entries(1);
  const ShaderTable table = reference_table(*b);
  EXPECT_EQ(table.entries().size(), 8u);
  b->build_shader_table_entries();
  ASSERT_EQ(b->shader_table().entries().size(), 8u);
  const auto expected = reference_entries(b->description());
  for (std::size_t j = 0; j < expected.size(); ++j) {
    EXPECT_EQ(b->shader_table().entries()[j].ray_id, expected[j].ray_id);
    EXPECT_EQ(b->shader_table().entries()[j].hit_group_id, expected[j].hit_group_id);
    EXPECT_EQ(b->shader_table().entries()[j].local_signature_id, expected[j].local_signature_id);
    EXPECT_EQ(b->shader_table().entries()[j].root_arguments, expected[j].root_arguments);
  }
}

TEST(ShaderTableTest, EntryChecks) {
  auto b = sample_without_entries();
  ShaderTable table(b->scene());
  EXPECT_EQ(
      error_code_of([&] { table.add_common_entry({"Radiance", "Triangle", "Triangle", ProceduralRootArguments{}}); }),
      ErrorCode::kTypeMismatch);
  EXPECT_EQ(error_code_of([&] { table.add_common_entry({"Radiance", "Nope", "Triangle", TriangleRootArguments{}}); }),
            ErrorCode::kUnknownId);
  EXPECT_EQ(error_code_of([&] { table.add_common_entry({"Nope", "Triangle", "Triangle", TriangleRootArguments{}}); }),
            ErrorCode::kUnknownId);
  EXPECT_EQ(error_code_of([&] { table.add_common_entry({"Radiance", "Triangle", "Nope", TriangleRootArguments{}}); }),
            ErrorCode::kUnknownId);
  EXPECT_TRUE(table.entries().empty());
}

TEST(ShaderTableTest, ProceduralRecordsSitAtTwoPlusTwoK) {
  auto b = sample_without_entries(2);
  const BuiltShaderTable built = reference_table(*b).build();
  // Oracle: triangle sub-table of length 2, then m=2 records per procedural instance.
  std::vector<std::pair<PrimitiveType, std::string>> procedurals;
  for (const GeometryDescription& g : b->description().geometries) {
    for (std::size_t n = 0; n < g.instances.size() && g.kind == GeometryKind::kProcedural; ++n) {
      procedurals.emplace_back(g.primitive, g.id);
    }
  }
  ASSERT_EQ(procedurals.size(), 4u);
  ASSERT_EQ(built.record_count(), 2 + 2 * procedurals.size());
  for (std::uint32_t k = 0; k < procedurals.size(); ++k) {
    const HitGroupRecord radiance = built.record(2 + 2 * k);
    const HitGroupRecord shadow = built.record(2 + 2 * k + 1);
    EXPECT_EQ(radiance.hit_group->id.str(), procedurals[k].second);
    EXPECT_EQ(shadow.hit_group->id.str(), procedurals[k].second + "_Shadow");
    EXPECT_EQ(radiance.ray->id, EntityId("Radiance"));
    EXPECT_EQ(shadow.ray->id, EntityId("Shadow"));
    const auto& args = radiance.root_arguments.as<ProceduralRootArguments>();
    EXPECT_EQ(args.instance.instance_index, k);
    EXPECT_EQ(args.instance.primitive_type, procedurals[k].first);
  }
}

TEST(ShaderTableTest, StrideAndBytes) {
  auto b = sample_without_entries();
  const BuiltShaderTable built = reference_table(*b).build();
  EXPECT_EQ(built.stride_bytes(), BuiltShaderTable::kHeaderSize + max_root_arguments_size());
  for (std::size_t j = 0; j < built.record_count(); ++j) {
    EXPECT_EQ(built.record_bytes(j).size(), built.stride_bytes());
  }
  EXPECT_EQ(error_code_of([&] { (void)built.record_bytes(built.record_count()); }), ErrorCode::kOutOfRange);
}

TEST(ShaderTableTest, SwappedTriangleEntriesViolateLayout) {
  auto b = sample_without_entries();
  ShaderTable table(b->scene());
  table.add_ray_gen("Raygen");
  table.add_miss("Radiance");
  table.add_miss("Shadow");
  auto entries = reference_entries(b->description());
  std::swap(entries[0], entries[1]);
  for (ShaderTableEntry& e : entries) table.add_common_entry(e);
  try {
    (void)table.build();
    FAIL() << "expected LayoutViolation";
  } catch (const LayoutViolation& v) {
    EXPECT_EQ(v.code(), ErrorCode::kLayoutViolation);
    EXPECT_EQ(v.record_index(), 0u);
    EXPECT_EQ(v.expected().ray_contribution, 0u);
    EXPECT_EQ(v.expected().geometry_contribution, 0u);
    EXPECT_EQ(v.expected().instance_contribution, 0u);
  }
}

TEST(ShaderTableTest, MissingRecordsFailValidation) {
  auto b = sample_without_entries();
  ShaderTable ray_gen_only(b->scene());
  ray_gen_only.add_ray_gen("Raygen");
  EXPECT_EQ(error_code_of([&] { (void)ray_gen_only.build(); }), ErrorCode::kValidationFailure);

  ShaderTable no_ray_gen(b->scene());
  no_ray_gen.add_miss("Radiance");
  no_ray_gen.add_miss("Shadow");
  EXPECT_EQ(error_code_of([&] { (void)no_ray_gen.build(); }), ErrorCode::kValidationFailure);

  ShaderTable short_table(b->scene());
  short_table.add_ray_gen("Raygen");
  short_table.add_miss("Radiance");
  short_table.add_miss("Shadow");
  auto entries = reference_entries(b->description());
  entries.pop_back();
  for (ShaderTableEntry& e : entries) short_table.add_common_entry(e);
  try {
    (void)short_table.build();
    FAIL() << "expected LayoutViolation";
  } catch (const LayoutViolation& v) {
    EXPECT_EQ(v.record_index(), entries.size());
    EXPECT_EQ(v.expected().ray_contribution, 1u);
  }
}

TEST(ShaderTableTest, EveryReachableTupleLandsOnItsRay) {
  auto b = sample_without_entries(2);
  const BuiltShaderTable built = reference_table(*b).build(ShaderTable::BuildOptions{5});
  const AccelerationStructure& as = *b->acceleration_structure();
  const std::uint32_t m = built.ray_type_count();
  for (AddressGranularity granularity : {AddressGranularity::kRecord, AddressGranularity::kByte}) {
    for (std::uint32_t r = 0; r < m; ++r) {
      for (const TlasInstance& inst : as.instances()) {
        const std::uint64_t address =
            record_address(built.start(granularity), built.stride(granularity), r, m, 0, inst.instance_contribution);
        const std::size_t index = built.record_index(address, granularity);
        EXPECT_EQ(index, r + inst.instance_contribution);
        EXPECT_EQ(b->scene()->ray_contribution(built.record(index).ray->id), r);
      }
    }
  }
  EXPECT_EQ(built.start(AddressGranularity::kByte), 5 * built.stride_bytes());
  EXPECT_EQ(error_code_of([&] { (void)built.record_index(4, AddressGranularity::kRecord); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(error_code_of([&] { (void)built.record_index(5 + built.record_count(), AddressGranularity::kRecord); }),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(error_code_of([&] {
              (void)built.record_index(built.start(AddressGranularity::kByte) + 1, AddressGranularity::kByte);
            }),
            ErrorCode::kOutOfRange);
}

TEST(ExportAssociationTest, ReferenceEntries) {
  auto b = sample_without_entries();
  const BuiltShaderTable built = reference_table(*b).build();
  const auto associations = derive_export_associations(built);
  EXPECT_EQ(associations.size(), 8u);
  std::set<EntityId> signatures;
  for (const auto& [group, signature] : associations) signatures.insert(signature);
  EXPECT_EQ(signatures.size(), 2u);
  EXPECT_EQ(associations.at("Triangle"), EntityId("Triangle"));
  EXPECT_EQ(associations.at("Triangle_Shadow"), EntityId("Triangle"));
  EXPECT_EQ(associations.at("Mandelbulb"), EntityId("Procedural"));
  EXPECT_EQ(associations.at("Julia_Shadow"), EntityId("Procedural"));
}

TEST(ExportAssociationTest, SingleAndConflicting) {
  const std::vector<ShaderTableEntry> one = {{"Radiance", "Triangle", "Triangle", TriangleRootArguments{}}};
  const auto single = derive_export_associations(one);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.begin()->second, EntityId("Triangle"));
  const std::vector<ShaderTableEntry> conflicting = {{"Radiance", "Pacman", "Procedural", ProceduralRootArguments{}},
                                                     {"Shadow", "Pacman", "Other", ProceduralRootArguments{}}};
  EXPECT_EQ(error_code_of([&] { derive_export_associations(conflicting); }), ErrorCode::kConflictingAssociation);
}

}  // namespace
}  // namespace procrt
