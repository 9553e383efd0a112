// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "procrt/image.hpp"
#include "procrt/pipeline.hpp"
#include "procrt/sample_scene.hpp"

namespace procrt {

struct RenderConfig {
  std::uint32_t width = 320;
  std::uint32_t height = 240;
  /// "-" streams the image to standard output.
  std::string output_path = "frame.ppm";
  double time = 0.0;
  Camera camera;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Absent renders the built-in sample scene.
  std::optional<std::string> scene_path;

  /// Throws InvalidArgument for an empty frame or an invalid camera.
  void validate() const;
};

struct RenderResult {
  Image image;
  PipelineStats stats;
  double build_ms = 0.0;
  double render_ms = 0.0;
};

/// Builds the sample pipeline for the description and renders one frame.
RenderResult render(const RenderConfig& config, const SceneDescription& description);

/// "rays=<n> build_ms=<x> render_ms=<y>" on one line.
std::string format_stats(const RenderResult& result);

}  // namespace procrt
