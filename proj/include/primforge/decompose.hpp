// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "primforge/superquadric.hpp"
#include "primforge/voxel_grid.hpp"

namespace primforge {

/// Negative thresholds decaying geometrically toward zero: t1 is the grid
/// minimum, each successor is alpha times the previous, and the sequence
/// stops before |t| drops under the floor magnitude.
struct ThresholdSequence {
  std::vector<double> values;
  double alpha = 0.6;
  double floor = 0.0;
};

/// Throws NoInterior when the grid has no negative voxel.
ThresholdSequence build_threshold_sequence(const VoxelGrid& grid, double alpha,
                                           double floor_magnitude);

/// A 26-connected set of active voxels strictly below the threshold it was
/// extracted at.
struct CandidateRegion {
  std::vector<std::int64_t> voxel_indices;
  double seed_threshold = 0.0;
  std::int64_t size() const { return std::int64_t(voxel_indices.size()); }
};

/// 26-connected components of {active voxels with value < threshold},
/// dropping components smaller than min_size. Deterministic order: size
/// descending, ties by smallest member index; each region's indices are
/// sorted ascending.
std::vector<CandidateRegion> extract_candidates(const VoxelGrid& grid, double threshold,
                                                const std::vector<std::uint8_t>& active,
                                                std::int64_t min_size);

/// Moment-based starting guess: centroid translation, principal-axis
/// rotation (extents descending, right-handed), sizes 1.1x the projected
/// half-extents floored at two voxels, unit exponents.
Superquadricd init_superquadric(const CandidateRegion& region, const VoxelGrid& grid);

struct FitOptions {
  int max_iters = 60;
  double tol = 1e-6;
  double weight_sigma = 0.0;  // 0 -> grid truncation
};

struct FitResult {
  Superquadricd params;
  double residual = 0.0;  // weighted mean squared TSDF error
  double coverage = 0.0;  // region fraction with |model - grid| < voxel size
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the weighted squared TSDF residual over the 11 parameters with
/// damped least squares (central-difference Jacobian, parameters projected
/// into bounds after every step). Weights exp(-(t/sigma)^2) cover the region
/// dilated by two voxels and vanish elsewhere.
FitResult fit_superquadric(const VoxelGrid& grid, const CandidateRegion& region,
                           const Superquadricd& init, const FitOptions& options = {});

struct DecomposeConfig {
  double alpha = 0.6;
  double floor = 0.0;  // 0 -> half a voxel size; see build_threshold_sequence
  std::int64_t min_voxels = 5;
  int max_primitives = 100;
  double accept_residual = 1e-2;
  double accept_coverage = 0.3;
  FitOptions fit;
  /// Retry the fit with the principal axes cyclically reassigned when the
  /// first attempt leaves a poor residual; picks the best of the three.
  bool multi_start = true;
};

struct DecomposeResult {
  std::vector<Superquadricd> primitives;  // in acceptance order
  std::vector<FitResult> fits;            // parallel to primitives
};

/// Marching sweep: for each threshold, extract candidate regions from the
/// still-active voxels, fit each (largest first), accept fits meeting the
/// residual and coverage gates, and deactivate voxels inside an accepted
/// primitive (implicit value <= 1). Stops when the sequence or the primitive
/// budget is exhausted. Throws NoInterior for all-positive grids.
DecomposeResult decompose_detailed(const VoxelGrid& grid, const DecomposeConfig& config = {});
std::vector<Superquadricd> decompose(const VoxelGrid& grid, const DecomposeConfig& config = {});

/// Support voxels and weights for the fitting objective: the given indices
/// dilated by `dilation` steps of 26-connectivity, weighted
/// exp(-(t/sigma)^2).
struct ObjectiveSupport {
  std::vector<std::int64_t> indices;
  std::vector<double> weights;
  double weight_sum = 0.0;
};

ObjectiveSupport make_objective_support(const VoxelGrid& grid,
                                        const std::vector<std::int64_t>& seed_indices,
                                        int dilation, double weight_sigma);

/// Weighted mean squared error between the superquadric's truncated radial
/// distance and the grid over the support.
double superquadric_objective(const Superquadricd& sq, const VoxelGrid& grid,
                              const ObjectiveSupport& support);

}  // namespace primforge
