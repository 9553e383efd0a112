// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/sphere_trace.hpp"

namespace procrt {

void SphereTraceConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sphere trace epsilon must be positive");
  if (max_steps < 1) throw Error(ErrorCode::kInvalidArgument, "sphere trace max_steps must be >= 1");
  if (!(step_scale > 0.0 && step_scale <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sphere trace step_scale must be in (0, 1]");
  }
}

}  // namespace procrt
