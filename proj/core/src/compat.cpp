// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/compat.hpp"

#include <algorithm>
#include <sstream>

namespace procrt {

std::string_view to_string(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::kMandelbulb:
      return "Mandelbulb";
    case PrimitiveType::kPacman:
      return "Pacman";
    case PrimitiveType::kJuliaSets:
      return "JuliaSets";
  }
  return "Unknown";
}

std::string_view to_string(CompatCategory category) {
  switch (category) {
    case CompatCategory::kPayload:
      return "Payload";
    case CompatCategory::kRootComponent:
      return "RootComponent";
    case CompatCategory::kRootArguments:
      return "RootArguments";
    case CompatCategory::kAttributeStruct:
      return "AttributeStruct";
  }
  return "Unknown";
}

InstanceTransform InstanceTransform::from_local_to_world(const Mat4& local_to_world) {
  const auto inverse = local_to_world.inverse();
  if (!inverse) throw Error(ErrorCode::kValidationFailure, "instance matrix is not invertible");
  InstanceTransform t{local_to_world, *inverse};
  if (!t.consistent()) {
    throw Error(ErrorCode::kValidationFailure, "instance matrix inverse is numerically unstable");
  }
  return t;
}

bool InstanceTransform::consistent(double tol) const { return identity_error(local_to_world, world_to_local) <= tol; }

const InstanceTransform& InstanceBuffer::at(std::size_t i) const {
  if (i >= size()) {
    throw Error(ErrorCode::kOutOfRange, "instance buffer index " + std::to_string(i) + " >= " + std::to_string(size()));
  }
  return (*transforms)[i];
}

std::size_t max_variant_size(std::span<const VariantLayout> variants) {
  if (variants.empty()) throw Error(ErrorCode::kEmptyCategory, "category has no variants");
  return std::max_element(variants.begin(), variants.end(),
                          [](const VariantLayout& a, const VariantLayout& b) { return a.size < b.size; })
      ->size;
}

void throw_type_mismatch(CompatCategory category, std::string_view expected, std::string_view actual) {
  std::ostringstream os;
  os << to_string(category) << " expected " << expected << " but holds " << actual;
  throw Error(ErrorCode::kTypeMismatch, os.str());
}

void throw_tag_mismatch(std::uint32_t expected_tag, std::uint32_t actual_tag) {
  std::ostringstream os;
  os << "tag 0x" << std::hex << actual_tag << " where 0x" << expected_tag << " was expected";
  throw Error(ErrorCode::kTypeMismatch, os.str());
}

std::size_t max_payload_size() { return Payload::max_size(); }
std::size_t max_root_arguments_size() { return RootArguments::max_size(); }
std::size_t max_attribute_size() { return AttributeStruct::max_size(); }

namespace layout {

void ByteWriter::scalar(const void* src, std::size_t size) {
  const std::size_t at = align_up(offset_, size);
  if (at + size > out_.size()) throw Error(ErrorCode::kOutOfRange, "packed write past buffer end");
  std::fill(out_.begin() + static_cast<std::ptrdiff_t>(offset_), out_.begin() + static_cast<std::ptrdiff_t>(at),
            std::byte{0});
  std::memcpy(out_.data() + at, src, size);
  offset_ = at + size;
}

void ByteReader::scalar(void* dst, std::size_t size) {
  const std::size_t at = align_up(offset_, size);
  if (at + size > in_.size()) throw Error(ErrorCode::kOutOfRange, "packed read past buffer end");
  std::memcpy(dst, in_.data() + at, size);
  offset_ = at + size;
}

}  // namespace layout

namespace {

bool finite(const Rgba& c) {
  return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b) && std::isfinite(c.a);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); }

}  // namespace

void validate(const Payload& payload) {
  if (payload.holds<RayPayload>()) {
    const auto& p = payload.as<RayPayload>();
    if (!finite(p.color)) invalid("RayPayload color is not finite");
    if (p.recursion_depth > kMaxRecursion) invalid("RayPayload recursion depth exceeds limit");
  }
}

void validate(const AttributeStruct& attributes) {
  if (attributes.holds<ProceduralPrimitiveAttributes>()) {
    const Vec3 n(attributes.as<ProceduralPrimitiveAttributes>().normal);
    if (std::abs(length(n) - 1.0) > 1e-4) invalid("procedural normal is not unit length");
  } else {
    const Float2 b = attributes.as<TriangleAttributes>().barycentrics;
    if (b.x < 0.0f || b.y < 0.0f || b.x > 1.0f || b.y > 1.0f || static_cast<double>(b.x) + b.y > 1.0 + 1e-6) {
      invalid("barycentrics outside the triangle");
    }
  }
}

void validate(const PrimitiveConstantBuffer& material) {
  if (!finite(material.albedo)) invalid("albedo is not finite");
  if (!(material.step_scale > 0.0f)) invalid("step_scale must be positive");
  if (material.reflectance < 0.0f || material.reflectance > 1.0f) invalid("reflectance outside [0,1]");
}

void validate(const SceneConstantBuffer& constants) {
  if (!(std::abs(constants.projection_to_world.determinant()) > 1e-12)) {
    invalid("projection_to_world is not invertible");
  }
  if (!finite(constants.light_ambient) || !finite(constants.light_diffuse)) {
    invalid("light colors are not finite");
  }
}

}  // namespace procrt
