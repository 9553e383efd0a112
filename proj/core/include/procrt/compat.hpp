// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

// Host <-> shader compatibility layer. Every struct a shader callback can see
// lives here, grouped into four categories. Each category is a tagged union
// whose accessors check the tag at runtime and throw TypeMismatch.
//
// Packed layout used for sizing and for shader-table records: fields in
// declaration order, 4-byte scalars aligned to 4, bools are one byte, no
// trailing padding.

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "procrt/error.hpp"
#include "procrt/math.hpp"
#include "procrt/transform.hpp"

namespace procrt {

inline constexpr std::uint32_t kMaxRecursion = 3;

// ---------------------------------------------------------------------------
// Plain data shared with shaders.

struct Rgba {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;
  float a = 1.0f;

  auto tie() { return std::tie(r, g, b, a); }
  auto tie() const { return std::tie(r, g, b, a); }
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

struct Float2 {
  float x = 0.0f;
  float y = 0.0f;

  auto tie() { return std::tie(x, y); }
  auto tie() const { return std::tie(x, y); }
  friend bool operator==(const Float2&, const Float2&) = default;
};

enum class PrimitiveType : std::uint32_t { kMandelbulb = 0, kPacman = 1, kJuliaSets = 2 };

std::string_view to_string(PrimitiveType type);

// Category 1: payloads.

struct RayPayload {
  static constexpr std::string_view kName = "RayPayload";
  Rgba color{};
  std::uint32_t recursion_depth = 0;

  auto tie() { return std::tie(color, recursion_depth); }
  auto tie() const { return std::tie(color, recursion_depth); }
  friend bool operator==(const RayPayload&, const RayPayload&) = default;
};

struct ShadowRayPayload {
  static constexpr std::string_view kName = "ShadowRayPayload";
  bool hit = false;

  auto tie() { return std::tie(hit); }
  auto tie() const { return std::tie(hit); }
  friend bool operator==(const ShadowRayPayload&, const ShadowRayPayload&) = default;
};

// Category 2: root components.

/// An engine-owned resource the compatibility layer does not describe, such
/// as the acceleration structure or the output texture.
struct DontApply {
  static constexpr std::string_view kName = "DontApply";
  std::string resource;
  friend bool operator==(const DontApply&, const DontApply&) = default;
};

struct SceneConstantBuffer {
  static constexpr std::string_view kName = "SceneConstantBuffer";
  Vec3 camera_position{};
  Mat4 projection_to_world = Mat4::identity();
  Vec3 light_position{};
  Rgba light_ambient{};
  Rgba light_diffuse{};
  float elapsed_time = 0.0f;
  friend bool operator==(const SceneConstantBuffer&, const SceneConstantBuffer&) = default;
};

/// Shared, immutable array of procedural instance transforms.
struct InstanceBuffer {
  static constexpr std::string_view kName = "InstanceBuffer";
  std::shared_ptr<const std::vector<InstanceTransform>> transforms;

  std::size_t size() const { return transforms ? transforms->size() : 0; }
  const InstanceTransform& at(std::size_t i) const;
  friend bool operator==(const InstanceBuffer& a, const InstanceBuffer& b) {
    if (a.size() != b.size()) return false;
    return a.size() == 0 || *a.transforms == *b.transforms;
  }
};

struct PrimitiveConstantBuffer {
  static constexpr std::string_view kName = "PrimitiveConstantBuffer";
  Rgba albedo{};
  float reflectance = 0.0f;
  float diffuse_coef = 0.9f;
  float specular_coef = 0.4f;
  float specular_power = 50.0f;
  float step_scale = 1.0f;

  auto tie() { return std::tie(albedo, reflectance, diffuse_coef, specular_coef, specular_power, step_scale); }
  auto tie() const { return std::tie(albedo, reflectance, diffuse_coef, specular_coef, specular_power, step_scale); }
  friend bool operator==(const PrimitiveConstantBuffer&, const PrimitiveConstantBuffer&) = default;
};

/// Per-instance indices into the global instance buffer.
struct PrimitiveInstanceConstantBuffer {
  static constexpr std::string_view kName = "PrimitiveInstanceConstantBuffer";
  PrimitiveType primitive_type = PrimitiveType::kMandelbulb;
  std::uint32_t instance_index = 0;

  auto tie() { return std::tie(primitive_type, instance_index); }
  auto tie() const { return std::tie(primitive_type, instance_index); }
  friend bool operator==(const PrimitiveInstanceConstantBuffer&, const PrimitiveInstanceConstantBuffer&) = default;
};

// Category 3: root arguments.

struct TriangleRootArguments {
  static constexpr std::string_view kName = "TriangleRootArguments";
  PrimitiveConstantBuffer material{};

  auto tie() { return std::tie(material); }
  auto tie() const { return std::tie(material); }
  friend bool operator==(const TriangleRootArguments&, const TriangleRootArguments&) = default;
};

struct ProceduralRootArguments {
  static constexpr std::string_view kName = "ProceduralRootArguments";
  PrimitiveConstantBuffer material{};
  PrimitiveInstanceConstantBuffer instance{};

  auto tie() { return std::tie(material, instance); }
  auto tie() const { return std::tie(material, instance); }
  friend bool operator==(const ProceduralRootArguments&, const ProceduralRootArguments&) = default;
};

// Category 4: attribute structs.

struct ProceduralPrimitiveAttributes {
  static constexpr std::string_view kName = "ProceduralPrimitiveAttributes";
  Float3 normal{0.0f, 0.0f, 1.0f};  // local space

  auto tie() { return std::tie(normal); }
  auto tie() const { return std::tie(normal); }
  friend bool operator==(const ProceduralPrimitiveAttributes&, const ProceduralPrimitiveAttributes&) = default;
};

struct TriangleAttributes {
  static constexpr std::string_view kName = "TriangleAttributes";
  Float2 barycentrics{};

  auto tie() { return std::tie(barycentrics); }
  auto tie() const { return std::tie(barycentrics); }
  friend bool operator==(const TriangleAttributes&, const TriangleAttributes&) = default;
};

// ---------------------------------------------------------------------------
// Packed layout.

namespace layout {

template <typename T>
concept Tied = requires(T& t) { t.tie(); };

inline std::size_t align_up(std::size_t offset, std::size_t alignment) {
  return (offset + alignment - 1) / alignment * alignment;
}

class ByteWriter {
 public:
  explicit ByteWriter(std::span<std::byte> out) : out_(out) {}

  void scalar(const void* src, std::size_t size);
  std::size_t offset() const { return offset_; }

 private:
  std::span<std::byte> out_;
  std::size_t offset_ = 0;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> in) : in_(in) {}

  void scalar(void* dst, std::size_t size);
  std::size_t offset() const { return offset_; }

 private:
  std::span<const std::byte> in_;
  std::size_t offset_ = 0;
};

/// Byte offset bookkeeping only; used to compute packed sizes.
class SizeCounter {
 public:
  void scalar(const void*, std::size_t size) { offset_ = align_up(offset_, size) + size; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_ = 0;
};

template <typename Sink, typename T>
void write_field(Sink& sink, const T& value) {
  if constexpr (std::is_same_v<T, bool>) {
    const std::uint8_t b = value ? 1 : 0;
    sink.scalar(&b, 1);
  } else if constexpr (std::is_enum_v<T>) {
    const auto v = static_cast<std::uint32_t>(value);
    sink.scalar(&v, 4);
  } else if constexpr (std::is_same_v<T, float> || std::is_same_v<T, std::uint32_t> ||
                       std::is_same_v<T, std::int32_t>) {
    sink.scalar(&value, 4);
  } else if constexpr (std::is_same_v<T, Float3>) {
    write_field(sink, value.x);
    write_field(sink, value.y);
    write_field(sink, value.z);
  } else {
    static_assert(Tied<T>, "packed types must expose tie()");
    std::apply([&](const auto&... f) { (write_field(sink, f), ...); }, value.tie());
  }
}

template <typename T>
void read_field(ByteReader& reader, T& value) {
  if constexpr (std::is_same_v<T, bool>) {
    std::uint8_t b = 0;
    reader.scalar(&b, 1);
    value = b != 0;
  } else if constexpr (std::is_enum_v<T>) {
    std::uint32_t v = 0;
    reader.scalar(&v, 4);
    value = static_cast<T>(v);
  } else if constexpr (std::is_same_v<T, float> || std::is_same_v<T, std::uint32_t> ||
                       std::is_same_v<T, std::int32_t>) {
    reader.scalar(&value, 4);
  } else if constexpr (std::is_same_v<T, Float3>) {
    read_field(reader, value.x);
    read_field(reader, value.y);
    read_field(reader, value.z);
  } else {
    static_assert(Tied<T>, "packed types must expose tie()");
    std::apply([&](auto&... f) { (read_field(reader, f), ...); }, value.tie());
  }
}

template <typename T>
std::size_t packed_size() {
  SizeCounter counter;
  write_field(counter, T{});
  return counter.offset();
}

}  // namespace layout

// ---------------------------------------------------------------------------
// Tagged unions.

enum class CompatCategory : std::uint32_t {
  kPayload = 1,
  kRootComponent = 2,
  kRootArguments = 3,
  kAttributeStruct = 4,
};

std::string_view to_string(CompatCategory category);

/// Name and packed byte size of one variant of a category.
struct VariantLayout {
  std::string_view name;
  std::size_t size = 0;
};

/// Largest size in the set; throws EmptyCategory on an empty set.
std::size_t max_variant_size(std::span<const VariantLayout> variants);

/// Builds the category-qualified tag stored in records. Tags are unique
/// across categories, so bytes written for one category can never be read
/// back as another.
constexpr std::uint32_t make_tag(CompatCategory category, std::uint32_t index) {
  return (static_cast<std::uint32_t>(category) << 16) | index;
}

[[noreturn]] void throw_type_mismatch(CompatCategory category, std::string_view expected, std::string_view actual);
[[noreturn]] void throw_tag_mismatch(std::uint32_t expected_tag, std::uint32_t actual_tag);

template <CompatCategory kCategory, typename... Ts>
class TaggedUnion {
 public:
  using Variant = std::variant<Ts...>;
  static constexpr CompatCategory kCategoryId = kCategory;

  template <typename T>
  static constexpr bool kIsMember = (std::is_same_v<T, Ts> || ...);

  template <typename T>
    requires kIsMember<std::decay_t<T>>
  TaggedUnion(T&& value) : value_(std::forward<T>(value)) {}  // NOLINT(google-explicit-constructor)

  template <typename T>
    requires kIsMember<T>
  static constexpr std::uint32_t tag_of() {
    std::uint32_t index = 0;
    std::uint32_t found = 0;
    ((std::is_same_v<T, Ts> ? (found = index, ++index) : ++index), ...);
    return make_tag(kCategory, found);
  }

  std::uint32_t tag() const { return make_tag(kCategory, static_cast<std::uint32_t>(value_.index())); }

  std::string_view type_name() const {
    return std::visit([](const auto& v) { return std::decay_t<decltype(v)>::kName; }, value_);
  }

  template <typename T>
    requires kIsMember<T>
  bool holds() const {
    return std::holds_alternative<T>(value_);
  }

  template <typename T>
    requires kIsMember<T>
  T& as() {
    if (auto* p = std::get_if<T>(&value_)) return *p;
    throw_type_mismatch(kCategory, T::kName, type_name());
  }

  template <typename T>
    requires kIsMember<T>
  const T& as() const {
    if (const auto* p = std::get_if<T>(&value_)) return *p;
    throw_type_mismatch(kCategory, T::kName, type_name());
  }

  /// Throws TypeMismatch unless both values carry the same tag.
  void expect_same_tag(const TaggedUnion& other) const {
    if (tag() != other.tag()) throw_type_mismatch(kCategory, other.type_name(), type_name());
  }

  const Variant& variant() const { return value_; }

  static std::vector<VariantLayout> layouts()
    requires(layout::Tied<Ts> && ...)
  {
    return {VariantLayout{Ts::kName, layout::packed_size<Ts>()}...};
  }

  static std::size_t max_size()
    requires(layout::Tied<Ts> && ...)
  {
    const auto all = layouts();
    return max_variant_size(all);
  }

  std::size_t packed_size() const
    requires(layout::Tied<Ts> && ...)
  {
    return std::visit([](const auto& v) { return layout::packed_size<std::decay_t<decltype(v)>>(); }, value_);
  }

  /// Writes the packed fields (no tag) into out, which must hold packed_size().
  void pack(std::span<std::byte> out) const
    requires(layout::Tied<Ts> && ...)
  {
    layout::ByteWriter writer(out);
    std::visit([&](const auto& v) { layout::write_field(writer, v); }, value_);
  }

  /// Reads the packed fields of the variant named by stored_tag, after
  /// checking it against expected_tag.
  static TaggedUnion unpack(std::uint32_t stored_tag, std::uint32_t expected_tag, std::span<const std::byte> in)
    requires(layout::Tied<Ts> && ...)
  {
    if (stored_tag != expected_tag) throw_tag_mismatch(expected_tag, stored_tag);
    return unpack_any(stored_tag, in);
  }

  static TaggedUnion unpack_any(std::uint32_t stored_tag, std::span<const std::byte> in)
    requires(layout::Tied<Ts> && ...)
  {
    std::optional<TaggedUnion> result;
    (try_unpack<Ts>(stored_tag, in, result), ...);
    if (!result) throw_tag_mismatch(make_tag(kCategory, 0), stored_tag);
    return std::move(*result);
  }

  /// Self-describing blob: 4-byte tag followed by the packed fields.
  std::vector<std::byte> serialize() const
    requires(layout::Tied<Ts> && ...)
  {
    std::vector<std::byte> out(4 + packed_size());
    const std::uint32_t t = tag();
    std::memcpy(out.data(), &t, 4);
    pack(std::span(out).subspan(4));
    return out;
  }

  static TaggedUnion deserialize(std::span<const std::byte> blob, std::uint32_t expected_tag)
    requires(layout::Tied<Ts> && ...)
  {
    if (blob.size() < 4) throw Error(ErrorCode::kInvalidArgument, "blob too short for a tag");
    std::uint32_t stored = 0;
    std::memcpy(&stored, blob.data(), 4);
    return unpack(stored, expected_tag, blob.subspan(4));
  }

  friend bool operator==(const TaggedUnion&, const TaggedUnion&) = default;

 private:
  template <typename T>
  static void try_unpack(std::uint32_t stored_tag, std::span<const std::byte> in, std::optional<TaggedUnion>& result) {
    if (result || stored_tag != tag_of<T>()) return;
    if (in.size() < layout::packed_size<T>()) {
      throw Error(ErrorCode::kInvalidArgument, std::string("truncated ") + std::string(T::kName));
    }
    T value{};
    layout::ByteReader reader(in);
    layout::read_field(reader, value);
    result.emplace(std::move(value));
  }

  Variant value_;
};

using Payload = TaggedUnion<CompatCategory::kPayload, RayPayload, ShadowRayPayload>;
using RootComponent = TaggedUnion<CompatCategory::kRootComponent, DontApply, SceneConstantBuffer, InstanceBuffer,
                                  PrimitiveConstantBuffer, PrimitiveInstanceConstantBuffer>;
using RootArguments = TaggedUnion<CompatCategory::kRootArguments, TriangleRootArguments, ProceduralRootArguments>;
using AttributeStruct =
    TaggedUnion<CompatCategory::kAttributeStruct, ProceduralPrimitiveAttributes, TriangleAttributes>;

std::size_t max_payload_size();
std::size_t max_root_arguments_size();
std::size_t max_attribute_size();

/// Checks the per-variant invariants (finite colors, recursion bound, unit
/// normals, barycentric range). Throws InvalidArgument naming the violation.
void validate(const Payload& payload);
void validate(const AttributeStruct& attributes);
void validate(const PrimitiveConstantBuffer& material);
void validate(const SceneConstantBuffer& constants);

}  // namespace procrt
