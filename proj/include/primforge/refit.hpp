// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "primforge/decompose.hpp"
#include "primforge/primitives.hpp"
#include "primforge/voxel_grid.hpp"

namespace primforge {

struct RefitOptions {
  int max_iters = 25;
  double tol = 1e-4;
  double weight_sigma = 0.0;    // 0 -> grid truncation
  int surface_samples = 4096;   // distance-proxy sampling density
  double fallback_factor = 1.2; // keep the superquadric geometry beyond this
};

struct RefitResult {
  PrimitiveRecord record;
  double sq_objective = 0.0;      // weighted TSDF error of the input superquadric
  double record_objective = 0.0;  // same objective for the returned record
  bool refit_applied = false;     // false on the fallback path
  int iterations = 0;
};

/// Weighted mean squared error between the canonical primitive's truncated
/// signed distance (nearest sampled surface point, signed by the inside
/// test) and the grid over the support.
double record_objective(const PrimitiveRecord& rec, const VoxelGrid& grid,
                        const ObjectiveSupport& support, int surface_samples = 4096);

/// Support for comparing a superquadric against its replacement: the voxels
/// inside the superquadric dilated by two steps.
ObjectiveSupport replacement_support(const Superquadricd& sq, const VoxelGrid& grid,
                                     double weight_sigma = 0.0);

/// Classifies the superquadric, then re-optimizes the canonical primitive
/// (sizes, pose, and the exponents confined to the class intervals) against
/// the grid. When the refit cannot hold the objective within
/// fallback_factor of the superquadric's own, the geometry is kept
/// unchanged and only the class is attached; the result then reports the
/// superquadric's objective, since the stored geometry is still the
/// superquadric's.
RefitResult replace_and_refit(const Superquadricd& sq, const VoxelGrid& grid,
                              const RefitOptions& options = {});

}  // namespace primforge
