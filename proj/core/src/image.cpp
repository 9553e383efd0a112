// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/image.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace procrt {

std::uint8_t encode_srgb8(float linear) {
  double c = std::isfinite(linear) ? std::clamp(static_cast<double>(linear), 0.0, 1.0) : 0.0;
  c = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

void write_ppm(std::ostream& out, const Image& image) {
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<char> row(std::size_t(image.width) * 3);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    for (std::uint32_t x = 0; x < image.width; ++x) {
      const Rgba& c = image.at(x, y);
      row[3 * x] = static_cast<char>(encode_srgb8(c.r));
      row[3 * x + 1] = static_cast<char>(encode_srgb8(c.g));
      row[3 * x + 2] = static_cast<char>(encode_srgb8(c.b));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path.string() + "' for writing");
  write_ppm(out, image);
  out.flush();
  if (!out) throw Error(ErrorCode::kInvalidArgument, "failed writing '" + path.string() + "'");
}

namespace {

std::uint32_t read_header_number(std::istream& in) {
  in >> std::ws;
  while (in.peek() == '#') {
    std::string comment;
    std::getline(in, comment);
    in >> std::ws;
  }
  std::uint32_t v = 0;
  if (!(in >> v)) throw Error(ErrorCode::kInvalidArgument, "malformed PPM header");
  return v;
}

}  // namespace

Pixmap read_ppm(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P6") throw Error(ErrorCode::kInvalidArgument, "not a binary PPM");
  Pixmap p;
  p.width = read_header_number(in);
  p.height = read_header_number(in);
  if (read_header_number(in) != 255) throw Error(ErrorCode::kInvalidArgument, "only maxval 255 is supported");
  in.get();
  p.rgb.resize(std::size_t(p.width) * p.height * 3);
  in.read(reinterpret_cast<char*>(p.rgb.data()), static_cast<std::streamsize>(p.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(p.rgb.size())) {
    throw Error(ErrorCode::kInvalidArgument, "truncated PPM pixel data");
  }
  return p;
}

Pixmap read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open '" + path.string() + "'");
  return read_ppm(in);
}

}  // namespace procrt
