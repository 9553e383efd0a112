// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

// JSON scene configuration.
//
//   {
//     "light":   {"position": [x,y,z], "ambient": [r,g,b,a], "diffuse": [r,g,b,a]},
//     "shaders": {"epsilon", "max_steps", "shadow_bias",
//                 "pacman": {"body_radius", "mouth_half_angle", "eye_radius", "eye_offset"},
//                 "julia": {"c": [x,y,z,w], "max_iterations", "escape_radius",
//                           "cut": {"normal": [x,y,z], "offset"}},
//                 "mandelbulb": {"power", "bailout", "min_iterations", "max_iterations", "period"}},
//     "geometries": [
//       {"id", "type": "triangle", "vertices": [{"position", "normal"}], "indices": [...],
//        "material": {...}, "instances": [[12 numbers], ...]},
//       {"id", "type": "procedural", "primitive": "Mandelbulb" | "Pacman" | "JuliaSets",
//        "aabb": {"min": [x,y,z], "max": [x,y,z]}, "material": {...}, "instances": [...]}
//     ]
//   }
//
// material: {"albedo": [r,g,b,a], "reflectance", "diffuse_coef", "specular_coef",
//            "specular_power", "step_scale"}. Instances are row-major affine 3x4
// local-to-world matrices. Everything except "geometries" and each geometry's
// "id", "type" and "instances" is optional. Unknown keys are rejected.

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "procrt/sample_scene.hpp"

namespace procrt {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kParse, kValidation, kIo };

  ConfigError(Kind kind, const std::string& message, std::size_t line = 0, std::size_t column = 0,
              std::string entity = {});

  Kind kind() const { return kind_; }
  /// 1-based position of a parse error; 0 otherwise.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// Geometry id or key path the validation error refers to.
  const std::string& entity() const { return entity_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string entity_;
};

/// Parses and validates; throws ConfigError.
SceneDescription parse_scene_config(std::string_view text);
SceneDescription load_scene_config(const std::filesystem::path& path);

/// Inverse of parse_scene_config; parsing the output reproduces the description exactly.
std::string dump_scene_config(const SceneDescription& description);

/// Structural checks shared by the loader and the renderer: non-empty,
/// unique ids, valid shapes, materials and invertible instance matrices.
void validate_description(const SceneDescription& description);

}  // namespace procrt
