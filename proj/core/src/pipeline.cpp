// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/pipeline.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <thread>

namespace procrt {

void Tracer::trace(TraceContext ctx, Payload& payload) const {
  ctx.recursion_depth = depth_;
  pipeline_->trace_ray(ctx, payload);
}

template <typename Fn>
void ShaderRegistry::insert(std::unordered_map<std::string, Fn>& map, std::string name, Fn fn) {
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty entry-point name");
  if (!fn) throw Error(ErrorCode::kInvalidArgument, "entry point '" + name + "' has no function");
  if (map.contains(name)) throw Error(ErrorCode::kDuplicateId, "entry point '" + name + "'");
  map.emplace(std::move(name), std::move(fn));
}

void ShaderRegistry::add_ray_gen(std::string name, RayGenShader fn) {
  insert(ray_gen_, std::move(name), std::move(fn));
}
void ShaderRegistry::add_miss(std::string name, MissShader fn) { insert(miss_, std::move(name), std::move(fn)); }
void ShaderRegistry::add_intersection(std::string name, IntersectionShader fn) {
  insert(intersection_, std::move(name), std::move(fn));
}
void ShaderRegistry::add_any_hit(std::string name, AnyHitShader fn) {
  insert(any_hit_, std::move(name), std::move(fn));
}
void ShaderRegistry::add_closest_hit(std::string name, ClosestHitShader fn) {
  insert(closest_hit_, std::move(name), std::move(fn));
}

bool ShaderRegistry::contains(ShaderKind kind, const std::string& name) const {
  switch (kind) {
    case ShaderKind::kRayGen:
      return ray_gen_.contains(name);
    case ShaderKind::kMiss:
      return miss_.contains(name);
    case ShaderKind::kIntersection:
      return intersection_.contains(name);
    case ShaderKind::kAnyHit:
      return any_hit_.contains(name);
    case ShaderKind::kClosestHit:
      return closest_hit_.contains(name);
  }
  return false;
}

namespace {

const RootSignature& global_signature_of(const Scene& scene, const EntityId& id) {
  if (id.empty()) throw Error(ErrorCode::kValidationFailure, "pipeline needs a global signature id");
  const RootSignature* s = scene.global_signatures().find(id);
  if (!s) throw Error(ErrorCode::kValidationFailure, "unknown global signature '" + id.str() + "'");
  return *s;
}

template <typename T>
const T& require(const std::shared_ptr<const T>& p, const char* what) {
  if (!p) throw Error(ErrorCode::kValidationFailure, std::string("pipeline needs ") + what);
  return *p;
}

[[noreturn]] void unresolved(const std::string& kind, const std::string& name, const std::string& where) {
  throw Error(ErrorCode::kValidationFailure, kind + " entry point '" + name + "' (" + where + ") is not registered");
}

}  // namespace

Pipeline::Pipeline(std::shared_ptr<const Scene> scene, std::shared_ptr<const AccelerationStructure> as,
                   std::shared_ptr<const BuiltShaderTable> table, ShaderRegistry registry, PipelineConfig config)
    : scene_(std::move(scene)),
      as_(std::move(as)),
      table_(std::move(table)),
      registry_(std::move(registry)),
      config_(std::move(config)),
      globals_(require(scene_, "a scene"), global_signature_of(*scene_, config_.global_signature),
               require(as_, "an acceleration structure")) {
  require(table_, "a built shader table");
  validate();
}

void Pipeline::validate() {
  const Scene& scene = *scene_;
  if (&table_->scene() != &scene) {
    throw Error(ErrorCode::kValidationFailure, "shader table was built for a different scene");
  }
  if (as_->instances().size() != scene.instance_count() || as_->blas().size() != scene.geometries().size()) {
    throw Error(ErrorCode::kValidationFailure, "acceleration structure does not match the scene");
  }
  if (as_->records_per_instance() != table_->ray_type_count()) {
    throw Error(ErrorCode::kValidationFailure,
                "instance contributions assume " + std::to_string(as_->records_per_instance()) +
                    " records per instance, table has " + std::to_string(table_->ray_type_count()) + " ray types");
  }
  if (config_.max_recursion == 0) throw Error(ErrorCode::kValidationFailure, "max_recursion must be >= 1");

  ray_gen_ = registry_.ray_gen(table_->ray_gen());
  if (!ray_gen_) unresolved("ray generation", table_->ray_gen(), "shader table");

  miss_shaders_.clear();
  for (const MissRecord& m : table_->miss_records()) {
    const MissShader* fn = registry_.miss(m.entry_point);
    if (!fn) unresolved("miss", m.entry_point, "ray '" + m.ray_id.str() + "'");
    miss_shaders_.push_back(fn);
  }

  resolved_.clear();
  for (std::size_t j = 0; j < table_->record_count(); ++j) {
    const HitGroupRecord record = table_->record(j);
    const HitGroup& g = *record.hit_group;
    ResolvedRecord rr;
    const std::string where = "hit group '" + g.id.str() + "'";
    if (g.intersection && !(rr.intersection = registry_.intersection(*g.intersection))) {
      unresolved("intersection", *g.intersection, where);
    }
    if (g.any_hit && !(rr.any_hit = registry_.any_hit(*g.any_hit))) unresolved("any-hit", *g.any_hit, where);
    if (g.closest_hit && !(rr.closest_hit = registry_.closest_hit(*g.closest_hit))) {
      unresolved("closest-hit", *g.closest_hit, where);
    }
    resolved_.push_back(rr);
  }
  associations_ = derive_export_associations(*table_);
}

std::size_t Pipeline::resolve_record(std::uint32_t ray_contribution, std::uint32_t geometry_multiplier,
                                     std::uint32_t geometry_contribution, std::uint32_t instance_contribution) const {
  const AddressGranularity mode = config_.granularity;
  const std::uint64_t address = record_address(table_->start(mode), table_->stride(mode), ray_contribution,
                                               geometry_multiplier, geometry_contribution, instance_contribution);
  return table_->record_index(address, mode);
}

void Pipeline::run_miss(const TraceContext& ctx, Payload& payload) const {
  const MissShader* fn = miss_shaders_.at(ctx.ray_contribution);
  RayContext rc{ctx.ray, ctx.ray.t_max, ctx.ray_contribution, ctx.geometry_multiplier, ctx.recursion_depth, nullptr, 0,
                0};
  miss_calls_.fetch_add(1, std::memory_order_relaxed);
  if (config_.on_invoke)
    config_.on_invoke(ShaderKind::kMiss, ctx.ray_contribution, table_->miss(ctx.ray_contribution).entry_point);
  (*fn)(payload, rc);
}

void Pipeline::trace_ray(const TraceContext& ctx, Payload& payload) const {
  const Scene& scene = *scene_;
  if (ctx.geometry_multiplier == 0) throw Error(ErrorCode::kInvalidArgument, "geometry multiplier must be positive");
  if (ctx.ray_contribution >= scene.rays().size()) {
    throw Error(ErrorCode::kInvalidArgument, "ray contribution " + std::to_string(ctx.ray_contribution) +
                                                 " >= " + std::to_string(scene.rays().size()) + " ray types");
  }
  const RayType& ray_type = scene.rays().items()[ctx.ray_contribution];
  payload.expect_same_tag(ray_type.payload_template);
  if (!(dot(ctx.ray.direction, ctx.ray.direction) > 0.0) || !(ctx.ray.t_min < ctx.ray.t_max)) {
    throw Error(ErrorCode::kInvalidArgument, "degenerate ray");
  }

  const std::uint32_t tag_in = payload.tag();
  auto check_tag = [&] {
    if (payload.tag() != tag_in) {
      throw Error(ErrorCode::kTypeMismatch, "shader changed the payload category of ray '" + ray_type.id.str() + "'");
    }
  };

  if (ctx.recursion_depth >= config_.max_recursion) {
    if (config_.recursion_policy == RecursionPolicy::kThrow) {
      throw Error(ErrorCode::kRecursionLimit, "trace at depth " + std::to_string(ctx.recursion_depth) +
                                                  " exceeds limit " + std::to_string(config_.max_recursion));
    }
    run_miss(ctx, payload);
    check_tag();
    return;
  }
  rays_traced_.fetch_add(1, std::memory_order_relaxed);

  const std::uint32_t r = ctx.ray_contribution;
  const std::uint32_t m = ctx.geometry_multiplier;

  TraversalCallbacks callbacks;
  callbacks.intersection = [&](const ProceduralCandidate& candidate, HitReporter& reporter) {
    const std::size_t index = resolve_record(r, m, 0, candidate.instance.instance_contribution);
    const ResolvedRecord& rr = resolved_[index];
    if (!rr.intersection) {
      throw Error(ErrorCode::kValidationFailure,
                  "record " + std::to_string(index) + " reached by a procedural instance has no intersection shader");
    }
    const HitGroupRecord record = table_->record(index);
    intersection_calls_.fetch_add(1, std::memory_order_relaxed);
    if (config_.on_invoke) config_.on_invoke(ShaderKind::kIntersection, index, *record.hit_group->intersection);
    (*rr.intersection)(
        LocalRay{candidate.local_ray.origin, candidate.local_ray.direction, candidate.t_enter, candidate.t_exit},
        record.root_arguments, globals_, reporter);
  };
  callbacks.filter = [&](const TraversalHit& hit) {
    const std::size_t index = resolve_record(r, m, hit.geometry_index, hit.instance->instance_contribution);
    const ResolvedRecord& rr = resolved_[index];
    if (!rr.any_hit) return CandidateDecision::kAccept;
    const HitGroupRecord record = table_->record(index);
    if (config_.on_invoke) config_.on_invoke(ShaderKind::kAnyHit, index, *record.hit_group->any_hit);
    const CandidateDecision decision = (*rr.any_hit)(payload, hit.attributes, record.root_arguments);
    check_tag();
    return decision;
  };

  const bool first = (ctx.flags & kRayFlagAcceptFirstHitAndEndSearch) != 0;
  const std::optional<TraversalHit> hit =
      first ? as_->traverse_first(ctx.ray, callbacks) : as_->traverse_closest(ctx.ray, callbacks);

  if (!hit) {
    run_miss(ctx, payload);
    check_tag();
    return;
  }
  const std::size_t index = resolve_record(r, m, hit->geometry_index, hit->instance->instance_contribution);
  const ResolvedRecord& rr = resolved_[index];
  if (rr.closest_hit) {
    const HitGroupRecord record = table_->record(index);
    RayContext rc{ctx.ray, hit->t, r, m, ctx.recursion_depth, hit->instance, hit->primitive_index, index};
    const Tracer child(*this, ctx.recursion_depth + 1);
    closest_hit_calls_.fetch_add(1, std::memory_order_relaxed);
    if (config_.on_invoke) config_.on_invoke(ShaderKind::kClosestHit, index, *record.hit_group->closest_hit);
    (*rr.closest_hit)(payload, hit->attributes, rc, record.root_arguments, globals_, child);
    check_tag();
  }
}

Image Pipeline::dispatch_rays(std::uint32_t width, std::uint32_t height, unsigned threads) const {
  Image image(width, height);
  if (width == 0 || height == 0) return image;

  constexpr std::uint32_t kTile = 16;
  const std::uint32_t tiles_x = (width + kTile - 1) / kTile;
  const std::uint32_t tiles_y = (height + kTile - 1) / kTile;
  const std::size_t tile_count = std::size_t(tiles_x) * tiles_y;

  struct Failure {
    std::size_t pixel = 0;
    std::string what;
    std::optional<ErrorCode> code;
  };
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::optional<Failure> failure;

  auto worker = [&] {
    while (!abort.load(std::memory_order_relaxed)) {
      const std::size_t tile = next.fetch_add(1);
      if (tile >= tile_count) return;
      const std::uint32_t x0 = static_cast<std::uint32_t>(tile % tiles_x) * kTile;
      const std::uint32_t y0 = static_cast<std::uint32_t>(tile / tiles_x) * kTile;
      for (std::uint32_t y = y0; y < std::min(y0 + kTile, height); ++y) {
        for (std::uint32_t x = x0; x < std::min(x0 + kTile, width); ++x) {
          std::optional<Failure> f;
          try {
            const Tracer tracer(*this, 0);
            image.at(x, y) = (*ray_gen_)(PixelCoord{x, y, width, height}, globals_, tracer);
          } catch (const Error& e) {
            f = Failure{std::size_t(y) * width + x, e.what(), e.code()};
          } catch (const std::exception& e) {
            f = Failure{std::size_t(y) * width + x, e.what(), std::nullopt};
          }
          if (f) {
            const std::lock_guard lock(failure_mutex);
            if (!failure || f->pixel < failure->pixel) failure = std::move(f);
            abort = true;
            return;
          }
        }
      }
    }
  };

  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, tile_count));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (failure) {
    throw ShaderFault(static_cast<std::uint32_t>(failure->pixel % width),
                      static_cast<std::uint32_t>(failure->pixel / width), failure->what, failure->code);
  }
  return image;
}

PipelineStats Pipeline::stats() const {
  return PipelineStats{rays_traced_.load(), intersection_calls_.load(), closest_hit_calls_.load(), miss_calls_.load()};
}

void Pipeline::reset_stats() const {
  rays_traced_ = 0;
  intersection_calls_ = 0;
  closest_hit_calls_ = 0;
  miss_calls_ = 0;
}

}  // namespace procrt
