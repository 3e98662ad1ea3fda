// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "primforge/mesh.hpp"
#include "primforge/voxel_grid.hpp"

namespace primforge {

/// One posed depth image. Pixels store range along the optical axis (+z of
/// the camera frame, x right, y down); values <= 0 or non-finite mean "no
/// measurement". camera_to_world maps camera coordinates to world.
struct DepthView {
  int width = 0;
  int height = 0;
  double fx = 0, fy = 0, cx = 0, cy = 0;
  Eigen::Matrix4d camera_to_world = Eigen::Matrix4d::Identity();
  std::vector<float> depth;  // row-major, depth[y * width + x]

  float depth_at(int x, int y) const { return depth[std::size_t(y) * width + x]; }

  /// Throws BadPose when the rotation block is not orthonormal with
  /// determinant +1 (tol 1e-6), or the intrinsics are unusable.
  void validate() const;
};

/// Weighted-mean projective TSDF fusion over the given grid. Each view
/// contributes clamp(d - z_cam, -truncation, truncation) with weight 1 to
/// every voxel that projects onto a valid pixel and lies no deeper than the
/// truncation band behind the observed surface; voxels observed by no view
/// stay at +truncation.
VoxelGrid fuse_depth_views(const std::vector<DepthView>& views, const GridSpec& spec);

struct VoxelizeStats {
  std::int64_t near_surface_voxels = 0;  // |value| < truncation
  std::int64_t sign_conflicts = 0;       // near-surface voxels with a 2-1 parity vote
  double conflict_fraction() const {
    return near_surface_voxels > 0 ? double(sign_conflicts) / double(near_surface_voxels) : 0.0;
  }
  /// Sign ambiguity worth warning about (> 1% of near-surface voxels).
  bool ambiguous() const { return conflict_fraction() > 0.01; }
};

/// Truncated signed distance field of a triangle mesh. Unsigned distances
/// are exact point-to-triangle minima within the truncation band; the sign
/// is the majority of ray-parity votes along the three grid axes, which
/// tolerates small cracks. Throws DegenerateMesh when the mesh has no
/// triangles.
VoxelGrid voxelize_mesh(const TriangleMesh& mesh, const GridSpec& spec,
                        VoxelizeStats* stats = nullptr);

/// Inside/outside classification of the voxel centres by the same 3-axis
/// parity vote the voxelizer uses, without computing distances.
std::vector<std::uint8_t> mesh_inside_mask(const TriangleMesh& mesh, const GridSpec& spec);

/// Similarity transform p -> (p - center) * scale used to fit inputs into
/// the canonical [-1, 1]^3 domain.
struct Normalization {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double scale = 1.0;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return (p - center) * scale; }
  Eigen::Vector3d invert(const Eigen::Vector3d& p) const { return p / scale + center; }
};

/// Centres the bounding box at the origin and scales the longest edge to 1.8
/// (90% of the canonical domain), in place. Returns the applied transform.
/// Throws DegenerateMesh for empty or zero-extent input.
Normalization normalize_mesh(TriangleMesh& mesh);

}  // namespace primforge
