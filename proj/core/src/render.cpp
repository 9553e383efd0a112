// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/render.hpp"

#include <chrono>
#include <cstdio>

namespace procrt {

void RenderConfig::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::kInvalidArgument, "width and height must be >= 1");
  camera.validate();
}

RenderResult render(const RenderConfig& config, const SceneDescription& description) {
  using Clock = std::chrono::steady_clock;
  config.validate();
  RenderResult result;

  const auto build_start = Clock::now();
  SampleSceneBuilder builder(description, FrameParameters{config.camera, config.width, config.height, config.time});
  builder.build();
  const auto pipeline = builder.create_pipeline();
  const auto build_end = Clock::now();

  result.image = pipeline->dispatch_rays(config.width, config.height, config.threads);
  const auto render_end = Clock::now();

  result.stats = pipeline->stats();
  result.build_ms = std::chrono::duration<double, std::milli>(build_end - build_start).count();
  result.render_ms = std::chrono::duration<double, std::milli>(render_end - build_end).count();
  return result;
}

std::string format_stats(const RenderResult& result) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "rays=%llu build_ms=%.1f render_ms=%.1f",
                static_cast<unsigned long long>(result.stats.rays_traced), result.build_ms, result.render_ms);
  return buf;
}

}  // namespace procrt
