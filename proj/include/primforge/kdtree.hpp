// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "primforge/superquadric.hpp"

namespace primforge {

/// Exact nearest-neighbour index over a fixed 3D point set. Median-split
/// balanced tree; queries are branch-and-bound and return the true minimum,
/// so results match a brute-force scan bit for bit (same squared-distance
/// arithmetic). Thread-safe after construction.
class KdTree3 {
 public:
  struct Hit {
    int index = -1;
    double sq_dist = std::numeric_limits<double>::infinity();
  };

  explicit KdTree3(PointsX3d points) : pts_(std::move(points)) {
    const int n = int(pts_.rows());
    order_.resize(std::size_t(n));
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(std::size_t(2 * n / kLeafSize + 2));
    if (n > 0) root_ = build(0, n);
  }

  int size() const { return int(pts_.rows()); }

  Hit nearest(const Eigen::Vector3d& q) const {
    Hit best;
    if (root_ >= 0) search(root_, q, best);
    return best;
  }

  /// Nearest neighbour not farther than sqrt(max_sq_dist); index -1 if none.
  Hit nearest_within(const Eigen::Vector3d& q, double max_sq_dist) const {
    Hit best;
    best.sq_dist = max_sq_dist;
    if (root_ >= 0) search(root_, q, best);
    if (best.index < 0) best.sq_dist = std::numeric_limits<double>::infinity();
    return best;
  }

 private:
  static constexpr int kLeafSize = 8;

  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;  // splitting coordinate
    int left = -1, right = -1;
    int begin = 0, end = 0;  // order_ range for leaves
  };

  int build(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return int(nodes_.size()) - 1;
    }
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d hi = -lo;
    for (int i = begin; i < end; ++i) {
      const Eigen::Vector3d p = pts_.row(order_[std::size_t(i)]).transpose();
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    int axis;
    (hi - lo).maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return pts_(a, axis) < pts_(b, axis); });
    node.axis = axis;
    node.split = pts_(order_[std::size_t(mid)], axis);
    nodes_.push_back(node);
    const int self = int(nodes_.size()) - 1;
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[std::size_t(self)].left = left;
    nodes_[std::size_t(self)].right = right;
    return self;
  }

  void search(int node_id, const Eigen::Vector3d& q, Hit& best) const {
    const Node& node = nodes_[std::size_t(node_id)];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[std::size_t(i)];
        const double d2 = (pts_.row(idx).transpose() - q).squaredNorm();
        if (d2 < best.sq_dist) {
          best.sq_dist = d2;
          best.index = idx;
        }
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search(near, q, best);
    if (delta * delta < best.sq_dist) search(far, q, best);
  }

  PointsX3d pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace primforge
