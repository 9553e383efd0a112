// Copyright 2026 The procrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "procrt/math.hpp"

namespace procrt {

/// Interior nodes store the index of their left child in `first`; the right
/// child is always `first + 1`. Leaves store a range into primitive_order().
struct BvhNode {
  Aabb bounds;
  std::uint32_t first = 0;
  std::uint32_t count = 0;

  bool leaf() const { return count > 0; }
};

/// Binary BVH built by median split on the longest centroid axis.
class Bvh {
 public:
  Bvh() = default;

  static Bvh build(std::span<const Aabb> boxes, std::uint32_t max_leaf_size);

  const std::vector<BvhNode>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& primitive_order() const { return order_; }
  bool empty() const { return nodes_.empty(); }
  Aabb bounds() const { return nodes_.empty() ? Aabb{} : nodes_.front().bounds; }

  /// Visits every leaf primitive whose node the ray enters within
  /// [t_min, t_max]. t_max is re-read on every node so visitors can shrink it.
  /// The visitor returns true to stop the traversal.
  template <typename Visitor>
  void traverse(const Vec3& origin, const Vec3& inv_direction, double t_min, const double& t_max,
                Visitor&& visit) const {
    if (nodes_.empty()) return;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const BvhNode& node = nodes_[stack[--top]];
      if (!intersect_slabs(node.bounds, origin, inv_direction, t_min, t_max)) continue;
      if (node.leaf()) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          if (visit(order_[i])) return;
        }
      } else {
        // Near child first: push the far one underneath.
        const int axis = nodes_[node.first].bounds.longest_axis();
        const bool left_first = inv_direction[axis] >= 0.0;
        stack[top++] = left_first ? node.first + 1 : node.first;
        stack[top++] = left_first ? node.first : node.first + 1;
      }
    }
  }

 private:
  std::vector<BvhNode> nodes_;
  std::vector<std::uint32_t> order_;
};

}  // namespace procrt
