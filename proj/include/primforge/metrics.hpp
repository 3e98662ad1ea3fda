// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "primforge/mesh.hpp"
#include "primforge/sampling.hpp"
#include "primforge/voxel_grid.hpp"

namespace primforge {

/// Squared bidirectional chamfer distance: mean nearest-neighbour squared
/// distance P->Q plus the same Q->P. Zero iff the sets are equal as sets.
/// Throws EmptySet.
double chamfer_distance(const PointsX3d& P, const PointsX3d& Q);

/// Surface F-score at threshold tau: harmonic mean of the fraction of P
/// within tau of Q (precision) and of Q within tau of P (recall); 0 when
/// both vanish. Throws EmptySet.
double f1_score(const PointsX3d& P, const PointsX3d& Q, double tau);

/// Mean absolute normal cosine against the positional nearest neighbour,
/// averaged over both directions. Throws EmptySet / NonUnitNormal.
double normal_consistency(const PointCloud& P, const PointCloud& Q);

/// Occupancy at the centres of a resolution^3 sampling of [-1, 1]^3:
/// negative TSDF values for grids, the 3-axis parity vote for meshes.
std::vector<std::uint8_t> occupancy(const VoxelGrid& grid, int resolution);
std::vector<std::uint8_t> occupancy(const TriangleMesh& mesh, int resolution);

/// Volumetric IoU of two occupancy masks (1.0 when both are empty).
double viou_masks(const std::vector<std::uint8_t>& A, const std::vector<std::uint8_t>& B);

double viou(const VoxelGrid& A, const VoxelGrid& B, int resolution);
double viou(const TriangleMesh& A, const TriangleMesh& B, int resolution);
double viou(const TriangleMesh& A, const VoxelGrid& B, int resolution);
double viou(const VoxelGrid& A, const TriangleMesh& B, int resolution);

struct MetricsReport {
  std::optional<double> cd;
  std::optional<double> viou;
  std::optional<double> f1;
  std::optional<double> nc;
  int sample_count = 10000;
  double f1_threshold = 0.02;
  int grid_resolution = 100;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

}  // namespace primforge
