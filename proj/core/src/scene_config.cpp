// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/scene_config.hpp"

#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace procrt {

using nlohmann::json;

ConfigError::ConfigError(Kind kind, const std::string& message, std::size_t line, std::size_t column,
                         std::string entity)
    : std::runtime_error(message), kind_(kind), line_(line), column_(column), entity_(std::move(entity)) {}

namespace {

[[noreturn]] void invalid(const std::string& entity, const std::string& what) {
  throw ConfigError(ConfigError::Kind::kValidation, entity + ": " + what, 0, 0, entity);
}

/// A JSON object being read, with the key path used in error messages.
class Reader {
 public:
  Reader(const json& value, std::string path, std::string entity)
      : value_(value), path_(std::move(path)), entity_(std::move(entity)) {
    if (!value_.is_object()) invalid(entity_, path_ + " must be an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, unused] : value_.items()) {
      bool known = false;
      for (std::string_view k : keys) known = known || k == key;
      if (!known) invalid(entity_, "unknown key '" + key + "' in " + path_);
    }
  }

  bool has(const char* key) const { return value_.contains(key); }
  const json& at(const char* key) const {
    if (!value_.contains(key)) invalid(entity_, "missing key '" + std::string(key) + "' in " + path_);
    return value_.at(key);
  }
  std::string child(const char* key) const { return path_ + "." + key; }
  const std::string& entity() const { return entity_; }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) invalid(entity_, child(key) + " must be a number");
    return v.get<double>();
  }
  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) invalid(entity_, child(key) + " must be an integer");
    return v.get<int>();
  }
  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) invalid(entity_, child(key) + " must be a string");
    return v.get<std::string>();
  }

 private:
  const json& value_;
  std::string path_;
  std::string entity_;
};

std::vector<double> numbers(const json& v, std::size_t count, const std::string& path, const std::string& entity) {
  if (!v.is_array() || v.size() != count) {
    invalid(entity, path + " must be an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) invalid(entity, path + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Vec3 read_vec3(const Reader& r, const char* key, Vec3 fallback) {
  if (!r.has(key)) return fallback;
  const auto v = numbers(r.at(key), 3, r.child(key), r.entity());
  return Vec3{v[0], v[1], v[2]};
}

Rgba read_rgba(const Reader& r, const char* key, Rgba fallback) {
  if (!r.has(key)) return fallback;
  const auto v = numbers(r.at(key), 4, r.child(key), r.entity());
  return Rgba{static_cast<float>(v[0]), static_cast<float>(v[1]), static_cast<float>(v[2]), static_cast<float>(v[3])};
}

PrimitiveConstantBuffer read_material(const json& v, const std::string& path, const std::string& entity) {
  const Reader r(v, path, entity);
  r.allow_only({"albedo", "reflectance", "diffuse_coef", "specular_coef", "specular_power", "step_scale"});
  PrimitiveConstantBuffer m;
  m.albedo = read_rgba(r, "albedo", m.albedo);
  m.reflectance = static_cast<float>(r.number("reflectance", m.reflectance));
  m.diffuse_coef = static_cast<float>(r.number("diffuse_coef", m.diffuse_coef));
  m.specular_coef = static_cast<float>(r.number("specular_coef", m.specular_coef));
  m.specular_power = static_cast<float>(r.number("specular_power", m.specular_power));
  m.step_scale = static_cast<float>(r.number("step_scale", m.step_scale));
  return m;
}

PrimitiveType read_primitive(const std::string& name, const std::string& entity) {
  if (name == "Mandelbulb") return PrimitiveType::kMandelbulb;
  if (name == "Pacman") return PrimitiveType::kPacman;
  if (name == "JuliaSets") return PrimitiveType::kJuliaSets;
  invalid(entity, "unknown primitive '" + name + "'");
}

GeometryDescription read_geometry(const json& v, std::size_t index) {
  const std::string path = "geometries[" + std::to_string(index) + "]";
  std::string entity = path;
  if (v.is_object() && v.contains("id") && v.at("id").is_string()) entity = v.at("id").get<std::string>();
  const Reader r(v, path, entity);
  GeometryDescription g;
  g.id = r.string("id");
  if (g.id.empty()) invalid(path, "id must not be empty");
  const std::string type = r.string("type");
  if (type == "triangle") {
    r.allow_only({"id", "type", "vertices", "indices", "material", "instances"});
    g.kind = GeometryKind::kTriangle;
    const json& vertices = r.at("vertices");
    if (!vertices.is_array()) invalid(entity, r.child("vertices") + " must be an array");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Reader vr(vertices[i], r.child("vertices") + "[" + std::to_string(i) + "]", entity);
      vr.allow_only({"position", "normal"});
      g.mesh.vertices.push_back(Vertex{read_vec3(vr, "position", Vec3{}), read_vec3(vr, "normal", Vec3{0, 1, 0})});
    }
    const json& indices = r.at("indices");
    if (!indices.is_array()) invalid(entity, r.child("indices") + " must be an array");
    for (const json& e : indices) {
      if (!e.is_number_unsigned()) invalid(entity, r.child("indices") + " must contain non-negative integers");
      g.mesh.indices.push_back(e.get<std::uint32_t>());
    }
  } else if (type == "procedural") {
    r.allow_only({"id", "type", "primitive", "aabb", "material", "instances"});
    g.kind = GeometryKind::kProcedural;
    g.primitive = read_primitive(r.string("primitive"), entity);
    const Reader box(r.at("aabb"), r.child("aabb"), entity);
    box.allow_only({"min", "max"});
    g.aabb = Aabb{read_vec3(box, "min", Vec3{}), read_vec3(box, "max", Vec3{})};
    if (!box.has("min") || !box.has("max")) invalid(entity, r.child("aabb") + " needs min and max");
  } else {
    invalid(entity, "type must be \"triangle\" or \"procedural\"");
  }
  if (r.has("material")) g.material = read_material(r.at("material"), r.child("material"), entity);
  const json& instances = r.at("instances");
  if (!instances.is_array()) invalid(entity, r.child("instances") + " must be an array");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto m = numbers(instances[i], 12, r.child("instances") + "[" + std::to_string(i) + "]", entity);
    g.instances.push_back(Mat4::from_affine_rows(std::span<const double, 12>(m.data(), 12)));
  }
  return g;
}

SampleShaderParams read_shaders(const json& v) {
  const Reader r(v, "shaders", "shaders");
  r.allow_only({"epsilon", "max_steps", "shadow_bias", "pacman", "julia", "mandelbulb"});
  SampleShaderParams s;
  s.epsilon = r.number("epsilon", s.epsilon);
  s.max_steps = r.integer("max_steps", s.max_steps);
  s.shadow_bias = r.number("shadow_bias", s.shadow_bias);
  if (r.has("pacman")) {
    const Reader p(r.at("pacman"), "shaders.pacman", "shaders");
    p.allow_only({"body_radius", "mouth_half_angle", "eye_radius", "eye_offset"});
    s.pacman.body_radius = p.number("body_radius", s.pacman.body_radius);
    s.pacman.mouth_half_angle = p.number("mouth_half_angle", s.pacman.mouth_half_angle);
    s.pacman.eye_radius = p.number("eye_radius", s.pacman.eye_radius);
    s.pacman.eye_offset = read_vec3(p, "eye_offset", s.pacman.eye_offset);
  }
  if (r.has("julia")) {
    const Reader j(r.at("julia"), "shaders.julia", "shaders");
    j.allow_only({"c", "max_iterations", "escape_radius", "cut"});
    if (j.has("c")) {
      const auto c = numbers(j.at("c"), 4, "shaders.julia.c", "shaders");
      s.julia.c = Quaternion{c[0], c[1], c[2], c[3]};
    }
    s.julia.max_iterations = j.integer("max_iterations", s.julia.max_iterations);
    s.julia.escape_radius = j.number("escape_radius", s.julia.escape_radius);
    if (j.has("cut")) {
      if (j.at("cut").is_null()) {
        s.julia.cut.reset();
      } else {
        const Reader c(j.at("cut"), "shaders.julia.cut", "shaders");
        c.allow_only({"normal", "offset"});
        CutPlane plane;
        plane.normal = read_vec3(c, "normal", plane.normal);
        plane.offset = c.number("offset", plane.offset);
        s.julia.cut = plane;
      }
    }
  }
  if (r.has("mandelbulb")) {
    const Reader m(r.at("mandelbulb"), "shaders.mandelbulb", "shaders");
    m.allow_only({"power", "bailout", "min_iterations", "max_iterations", "period"});
    s.mandelbulb.power = m.number("power", s.mandelbulb.power);
    s.mandelbulb.bailout = m.number("bailout", s.mandelbulb.bailout);
    s.animation.min_iterations = m.integer("min_iterations", s.animation.min_iterations);
    s.animation.max_iterations = m.integer("max_iterations", s.animation.max_iterations);
    s.animation.period = m.number("period", s.animation.period);
  }
  return s;
}

void validate_shaders(const SampleShaderParams& s) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) invalid("shaders", what);
  };
  check(s.epsilon > 0.0, "epsilon must be positive");
  check(s.max_steps >= 1, "max_steps must be >= 1");
  check(s.shadow_bias >= 0.0, "shadow_bias must be non-negative");
  check(s.pacman.body_radius > 0.0 && s.pacman.eye_radius >= 0.0, "pacman radii must be positive");
  check(s.julia.max_iterations >= 1 && s.julia.escape_radius > 1.0,
        "julia needs max_iterations >= 1, escape_radius > 1");
  if (s.julia.cut) check(length(s.julia.cut->normal) > 0.0, "julia cut normal must be non-zero");
  check(s.mandelbulb.power > 1.0 && s.mandelbulb.bailout > 1.0, "mandelbulb needs power > 1 and bailout > 1");
  check(s.animation.min_iterations >= 1 && s.animation.max_iterations >= s.animation.min_iterations,
        "mandelbulb needs 1 <= min_iterations <= max_iterations");
  check(s.animation.period > 0.0, "mandelbulb period must be positive");
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json rgba_json(const Rgba& c) {
  return json::array(
      {static_cast<double>(c.r), static_cast<double>(c.g), static_cast<double>(c.b), static_cast<double>(c.a)});
}

json material_json(const PrimitiveConstantBuffer& m) {
  return json{{"albedo", rgba_json(m.albedo)},
              {"reflectance", static_cast<double>(m.reflectance)},
              {"diffuse_coef", static_cast<double>(m.diffuse_coef)},
              {"specular_coef", static_cast<double>(m.specular_coef)},
              {"specular_power", static_cast<double>(m.specular_power)},
              {"step_scale", static_cast<double>(m.step_scale)}};
}

}  // namespace

void validate_description(const SceneDescription& description) {
  if (description.geometries.empty()) invalid("geometries", "at least one geometry is required");
  validate_shaders(description.shaders);
  std::set<std::string> ids;
  std::size_t triangle_geometries = 0;
  for (const GeometryDescription& g : description.geometries) {
    if (!ids.insert(g.id).second) invalid(g.id, "duplicate geometry id");
    if (g.kind == GeometryKind::kTriangle && ++triangle_geometries > 1) {
      invalid(g.id, "only one triangle geometry is supported");
    }
    if (g.instances.empty()) invalid(g.id, "at least one instance is required");
    try {
      validate(g.material);
      Geometry::Instances instances;
      for (const Mat4& m : g.instances) instances.push_back(InstanceTransform::from_local_to_world(m));
      if (g.kind == GeometryKind::kTriangle) {
        Geometry(g.id, g.mesh, std::move(instances));
      } else {
        Geometry(g.id, g.aabb, std::move(instances));
      }
    } catch (const Error& e) {
      invalid(g.id, e.what());
    }
  }
}

SceneDescription parse_scene_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ConfigError(
        ConfigError::Kind::kParse,
        "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what(), line,
        column);
  }
  try {
    const Reader r(root, "config", "config");
    r.allow_only({"light", "shaders", "geometries"});
    SceneDescription d;
    if (r.has("light")) {
      const Reader l(r.at("light"), "light", "light");
      l.allow_only({"position", "ambient", "diffuse"});
      d.light.position = read_vec3(l, "position", d.light.position);
      d.light.ambient = read_rgba(l, "ambient", d.light.ambient);
      d.light.diffuse = read_rgba(l, "diffuse", d.light.diffuse);
    }
    if (r.has("shaders")) d.shaders = read_shaders(r.at("shaders"));
    const json& geometries = r.at("geometries");
    if (!geometries.is_array()) invalid("geometries", "geometries must be an array");
    for (std::size_t i = 0; i < geometries.size(); ++i) d.geometries.push_back(read_geometry(geometries[i], i));
    validate_description(d);
    return d;
  } catch (const json::exception& e) {
    invalid("config", e.what());
  }
}

SceneDescription load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::kIo, "cannot open scene config '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scene_config(text);
}

std::string dump_scene_config(const SceneDescription& d) {
  json root;
  root["light"] = json{{"position", vec3_json(d.light.position)},
                       {"ambient", rgba_json(d.light.ambient)},
                       {"diffuse", rgba_json(d.light.diffuse)}};
  const SampleShaderParams& s = d.shaders;
  json julia{{"c", json::array({s.julia.c.x, s.julia.c.y, s.julia.c.z, s.julia.c.w})},
             {"max_iterations", s.julia.max_iterations},
             {"escape_radius", s.julia.escape_radius}};
  if (s.julia.cut) julia["cut"] = json{{"normal", vec3_json(s.julia.cut->normal)}, {"offset", s.julia.cut->offset}};
  root["shaders"] = json{{"epsilon", s.epsilon},
                         {"max_steps", s.max_steps},
                         {"shadow_bias", s.shadow_bias},
                         {"pacman",
                          {{"body_radius", s.pacman.body_radius},
                           {"mouth_half_angle", s.pacman.mouth_half_angle},
                           {"eye_radius", s.pacman.eye_radius},
                           {"eye_offset", vec3_json(s.pacman.eye_offset)}}},
                         {"julia", julia},
                         {"mandelbulb",
                          {{"power", s.mandelbulb.power},
                           {"bailout", s.mandelbulb.bailout},
                           {"min_iterations", s.animation.min_iterations},
                           {"max_iterations", s.animation.max_iterations},
                           {"period", s.animation.period}}}};
  json geometries = json::array();
  for (const GeometryDescription& g : d.geometries) {
    json out{{"id", g.id}};
    if (g.kind == GeometryKind::kTriangle) {
      out["type"] = "triangle";
      json vertices = json::array();
      for (const Vertex& v : g.mesh.vertices) {
        vertices.push_back(json{{"position", vec3_json(v.position)}, {"normal", vec3_json(v.normal)}});
      }
      out["vertices"] = vertices;
      out["indices"] = g.mesh.indices;
    } else {
      out["type"] = "procedural";
      out["primitive"] = std::string(to_string(g.primitive));
      out["aabb"] = json{{"min", vec3_json(g.aabb.min)}, {"max", vec3_json(g.aabb.max)}};
    }
    out["material"] = material_json(g.material);
    json instances = json::array();
    for (const Mat4& m : g.instances) {
      const auto rows = m.affine_rows();
      instances.push_back(std::vector<double>(rows.begin(), rows.end()));
    }
    out["instances"] = instances;
    geometries.push_back(out);
  }
  root["geometries"] = geometries;
  return root.dump(2) + "\n";
}

}  // namespace procrt
