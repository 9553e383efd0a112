// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "procrt/error.hpp"
#include "procrt/image.hpp"
#include "procrt/render.hpp"
#include "procrt/sample_scene.hpp"
#include "procrt/scene_config.hpp"

namespace procrt::cli {
namespace {

/// Stage a failure is attributed to in the error prefix.
enum class Stage { kConfig, kBuild, kRender, kIo };

struct StageError {
  Stage stage;
  std::string message;
};

const char* prefix(Stage stage) {
  switch (stage) {
    case Stage::kConfig:
      return "CONFIG";
    case Stage::kBuild:
      return "BUILD";
    case Stage::kRender:
      return "RENDER";
    case Stage::kIo:
      return "IO";
  }
  return "ERROR";
}

Vec3 parse_vec3(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw StageError{Stage::kConfig, flag + " expects x,y,z numbers, got '" + text + "'"};
    }
  }
  if (values.size() != 3) throw StageError{Stage::kConfig, flag + " expects x,y,z numbers, got '" + text + "'"};
  return Vec3{values[0], values[1], values[2]};
}

SceneDescription load_description(const std::string& scene_path) {
  if (scene_path.empty()) return default_scene_description();
  try {
    return load_scene_config(scene_path);
  } catch (const ConfigError& e) {
    throw StageError{e.kind() == ConfigError::Kind::kIo ? Stage::kIo : Stage::kConfig, e.what()};
  }
}

void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path == "-") {
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw StageError{Stage::kIo, "failed writing to standard output"};
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw StageError{Stage::kIo, "cannot open '" + path + "' for writing"};
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  file.close();
  if (!file) throw StageError{Stage::kIo, "failed writing '" + path + "'"};
}

struct RenderFlags {
  RenderConfig config;
  std::string scene;
  std::string camera_pos;
  std::string look_at;
  std::string up;
};

void run_render(const RenderFlags& flags, std::ostream& out, std::ostream& err) {
  RenderConfig config = flags.config;
  if (!flags.camera_pos.empty()) config.camera.position = parse_vec3(flags.camera_pos, "--camera-pos");
  if (!flags.look_at.empty()) config.camera.look_at = parse_vec3(flags.look_at, "--look-at");
  if (!flags.up.empty()) config.camera.up = parse_vec3(flags.up, "--up");
  if (!flags.scene.empty()) config.scene_path = flags.scene;
  try {
    config.validate();
  } catch (const Error& e) {
    throw StageError{Stage::kConfig, e.what()};
  }

  const SceneDescription description = load_description(flags.scene);

  RenderResult result;
  try {
    result = render(config, description);
  } catch (const ShaderFault& e) {
    throw StageError{Stage::kRender, e.what()};
  } catch (const Error& e) {
    throw StageError{Stage::kBuild, e.what()};
  }

  std::ostringstream encoded;
  write_ppm(encoded, result.image);
  write_output(config.output_path, encoded.str(), out);
  err << format_stats(result) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"procrt: software ray-tracing pipeline with procedural primitives"};
  app.require_subcommand(1);

  RenderFlags flags;
  CLI::App* render_cmd = app.add_subcommand("render", "Render the scene to a binary PPM image");
  render_cmd->add_option("--width", flags.config.width, "Image width in pixels")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1u << 15));
  render_cmd->add_option("--height", flags.config.height, "Image height in pixels")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1u << 15));
  render_cmd->add_option("--out", flags.config.output_path, "Output path, '-' for standard output")
      ->capture_default_str();
  render_cmd->add_option("--time", flags.config.time, "Frame time in seconds")->capture_default_str();
  render_cmd->add_option("--threads", flags.config.threads, "Worker threads, 0 for all cores")->capture_default_str();
  render_cmd->add_option("--scene", flags.scene, "Scene config (JSON); built-in sample scene when absent");
  render_cmd->add_option("--camera-pos", flags.camera_pos, "Camera position x,y,z");
  render_cmd->add_option("--look-at", flags.look_at, "Look-at point x,y,z");
  render_cmd->add_option("--up", flags.up, "Up vector x,y,z");
  render_cmd->add_option("--fov", flags.config.camera.vertical_fov_degrees, "Vertical field of view in degrees")
      ->capture_default_str();

  std::string dump_scene;
  std::string dump_out = "-";
  CLI::App* dump_cmd = app.add_subcommand("dump-scene", "Write a scene config as JSON");
  dump_cmd->add_option("--scene", dump_scene, "Scene config to normalize; built-in sample scene when absent");
  dump_cmd->add_option("--out", dump_out, "Output path, '-' for standard output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "CONFIG: " << e.what() << '\n';
    return 1;
  }

  try {
    if (render_cmd->parsed()) {
      run_render(flags, out, err);
    } else if (dump_cmd->parsed()) {
      write_output(dump_out, dump_scene_config(load_description(dump_scene)), out);
    }
  } catch (const StageError& e) {
    err << prefix(e.stage) << ": " << e.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "RENDER: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace procrt::cli
