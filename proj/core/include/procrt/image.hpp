// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "procrt/compat.hpp"

namespace procrt {

/// Linear RGBA framebuffer, rows top to bottom.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<Rgba> pixels;

  Image() = default;
  Image(std::uint32_t w, std::uint32_t h) : width(w), height(h), pixels(std::size_t(w) * h) {}

  Rgba& at(std::uint32_t x, std::uint32_t y) { return pixels[std::size_t(y) * width + x]; }
  const Rgba& at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t(y) * width + x]; }
};

/// Clamps a linear value to [0,1] and applies the sRGB transfer curve.
std::uint8_t encode_srgb8(float linear);

/// Binary PPM: "P6\n<w> <h>\n255\n" then RGB triples, rows top to bottom.
void write_ppm(std::ostream& out, const Image& image);
/// Throws Error(kInvalidArgument) when the file cannot be opened for writing.
void write_ppm(const std::filesystem::path& path, const Image& image);

/// Decoded 8-bit P6 contents.
struct Pixmap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;
};

Pixmap read_ppm(std::istream& in);
Pixmap read_ppm(const std::filesystem::path& path);

}  // namespace procrt
