// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#include "procrt/bvh.hpp"

#include <algorithm>

#include "procrt/error.hpp"

namespace procrt {

namespace {

struct Builder {
  std::span<const Aabb> boxes;
  std::vector<Vec3> centroids;
  std::uint32_t max_leaf;
  std::vector<BvhNode> nodes;
  std::vector<std::uint32_t> order;

  void subdivide(std::uint32_t node_index, std::uint32_t begin, std::uint32_t end, int depth) {
    Aabb bounds;
    Aabb centroid_bounds;
    for (std::uint32_t i = begin; i < end; ++i) {
      bounds.expand(boxes[order[i]]);
      centroid_bounds.expand(centroids[order[i]]);
    }
    nodes[node_index].bounds = bounds;
    const std::uint32_t count = end - begin;
    // Depth cap keeps the fixed traversal stack safe; 2^48 primitives would be needed to hit it.
    if (count <= max_leaf || depth >= 48) {
      nodes[node_index].first = begin;
      nodes[node_index].count = count;
      return;
    }
    const int axis = centroid_bounds.longest_axis();
    const std::uint32_t mid = begin + count / 2;
    // Total order (centroid, index) makes the split independent of input permutation quirks.
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = centroids[a][axis];
                       const double cb = centroids[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const auto left = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    nodes.emplace_back();
    nodes[node_index].first = left;
    nodes[node_index].count = 0;
    subdivide(left, begin, mid, depth + 1);
    subdivide(left + 1, mid, end, depth + 1);
  }
};

}  // namespace

Bvh Bvh::build(std::span<const Aabb> boxes, std::uint32_t max_leaf_size) {
  if (max_leaf_size == 0) throw Error(ErrorCode::kInvalidArgument, "leaf size must be positive");
  Bvh bvh;
  if (boxes.empty()) return bvh;
  Builder b{boxes, {}, max_leaf_size, {}, {}};
  b.centroids.reserve(boxes.size());
  for (const Aabb& box : boxes) b.centroids.push_back(box.centroid());
  b.order.resize(boxes.size());
  for (std::uint32_t i = 0; i < b.order.size(); ++i) b.order[i] = i;
  b.nodes.reserve(2 * boxes.size());
  b.nodes.emplace_back();
  b.subdivide(0, 0, static_cast<std::uint32_t>(boxes.size()), 0);
  bvh.nodes_ = std::move(b.nodes);
  bvh.order_ = std::move(b.order);
  return bvh;
}

}  // namespace procrt
