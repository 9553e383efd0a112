// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace procrt::cli {

/// Entry point of the procrt tool. Images streamed with "--out -" go to out;
/// stats and errors go to err. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace procrt::cli
