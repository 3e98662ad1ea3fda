// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "primforge/errors.hpp"
#include "primforge/levenberg_marquardt.hpp"
#include "primforge/parallel.hpp"

namespace primforge {

ThresholdSequence build_threshold_sequence(const VoxelGrid& grid, double alpha,
                                           double floor_magnitude) {
  double min_value = std::numeric_limits<double>::infinity();
  for (const float v : grid.values) min_value = std::min(min_value, double(v));
  if (min_value >= 0.0) throw NoInterior("grid has no negative voxel");

  ThresholdSequence seq;
  seq.alpha = alpha;
  seq.floor = floor_magnitude;
  for (double t = min_value; std::abs(t) >= floor_magnitude; t *= alpha) seq.values.push_back(t);
  return seq;
}

std::vector<CandidateRegion> extract_candidates(const VoxelGrid& grid, double threshold,
                                                const std::vector<std::uint8_t>& active,
                                                std::int64_t min_size) {
  const GridSpec spec = grid.spec();
  const std::int64_t n = spec.voxel_count();
  std::vector<std::uint8_t> member(std::size_t(n), 0);
  for (std::int64_t i = 0; i < n; ++i)
    member[std::size_t(i)] = (active[std::size_t(i)] && double(grid[i]) < threshold) ? 1 : 0;

  std::vector<CandidateRegion> regions;
  std::vector<std::int64_t> stack;
  for (std::int64_t seed = 0; seed < n; ++seed) {
    if (!member[std::size_t(seed)]) continue;
    CandidateRegion region;
    region.seed_threshold = threshold;
    member[std::size_t(seed)] = 0;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::int64_t idx = stack.back();
      stack.pop_back();
      region.voxel_indices.push_back(idx);
      const Eigen::Vector3i c = spec.coords(idx);
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            const int x = c.x() + dx, y = c.y() + dy, z = c.z() + dz;
            if (!spec.contains(x, y, z)) continue;
            const std::int64_t nb = spec.index(x, y, z);
            if (member[std::size_t(nb)]) {
              member[std::size_t(nb)] = 0;
              stack.push_back(nb);
            }
          }
    }
    if (region.size() >= min_size) {
      std::sort(region.voxel_indices.begin(), region.voxel_indices.end());
      regions.push_back(std::move(region));
    }
  }

  std::sort(regions.begin(), regions.end(), [](const CandidateRegion& a, const CandidateRegion& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.voxel_indices.front() < b.voxel_indices.front();
  });
  return regions;
}

Superquadricd init_superquadric(const CandidateRegion& region, const VoxelGrid& grid) {
  const GridSpec spec = grid.spec();
  const std::int64_t m = region.size();

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const std::int64_t idx : region.voxel_indices) centroid += spec.center(idx);
  centroid /= double(m);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const std::int64_t idx : region.voxel_indices) {
    const Eigen::Vector3d d = spec.center(idx) - centroid;
    cov += d * d.transpose();
  }
  cov /= double(m);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  // eigenvalues come out ascending; local x gets the largest extent
  Eigen::Matrix3d axes;
  axes.col(0) = eig.eigenvectors().col(2);
  axes.col(1) = eig.eigenvectors().col(1);
  axes.col(2) = eig.eigenvectors().col(0);
  if (axes.determinant() < 0.0) axes.col(2) = -axes.col(2);

  Eigen::Vector3d extent = Eigen::Vector3d::Zero();
  for (const std::int64_t idx : region.voxel_indices) {
    const Eigen::Vector3d d = spec.center(idx) - centroid;
    extent = extent.cwiseMax((axes.transpose() * d).cwiseAbs());
  }

  Superquadricd sq;
  sq.eps1 = 1.0;
  sq.eps2 = 1.0;
  sq.size = (1.1 * extent).cwiseMax(2.0 * spec.voxel_size);
  sq.euler = matrix_to_euler_xyz<double>(axes);
  sq.translation = centroid;
  return sq;
}

namespace {

Eigen::VectorXd pack(const Superquadricd& sq) {
  Eigen::VectorXd x(11);
  x << sq.eps1, sq.eps2, sq.size.x(), sq.size.y(), sq.size.z(), sq.euler.x(), sq.euler.y(),
      sq.euler.z(), sq.translation.x(), sq.translation.y(), sq.translation.z();
  return x;
}

Superquadricd unpack(const Eigen::VectorXd& x) {
  Superquadricd sq;
  sq.eps1 = x[0];
  sq.eps2 = x[1];
  sq.size = Eigen::Vector3d(x[2], x[3], x[4]);
  sq.euler = Eigen::Vector3d(x[5], x[6], x[7]);
  sq.translation = Eigen::Vector3d(x[8], x[9], x[10]);
  return sq;
}

}  // namespace

ObjectiveSupport make_objective_support(const VoxelGrid& grid,
                                        const std::vector<std::int64_t>& seed_indices,
                                        int dilation, double weight_sigma) {
  const GridSpec spec = grid.spec();
  const std::int64_t n = spec.voxel_count();
  std::vector<std::uint8_t> mask(std::size_t(n), 0);
  for (const std::int64_t idx : seed_indices) mask[std::size_t(idx)] = 1;

  std::vector<std::int64_t> frontier = seed_indices;
  for (int step = 0; step < dilation; ++step) {
    std::vector<std::int64_t> next;
    for (const std::int64_t idx : frontier) {
      const Eigen::Vector3i c = spec.coords(idx);
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            const int x = c.x() + dx, y = c.y() + dy, z = c.z() + dz;
            if (!spec.contains(x, y, z)) continue;
            const std::int64_t nb = spec.index(x, y, z);
            if (!mask[std::size_t(nb)]) {
              mask[std::size_t(nb)] = 1;
              next.push_back(nb);
            }
          }
    }
    frontier = std::move(next);
  }

  const double sigma = weight_sigma > 0.0 ? weight_sigma : grid.truncation;
  ObjectiveSupport support;
  for (std::int64_t i = 0; i < n; ++i) {
    if (!mask[std::size_t(i)]) continue;
    const double t = double(grid[i]);
    const double w = std::exp(-(t / sigma) * (t / sigma));
    support.indices.push_back(i);
    support.weights.push_back(w);
    support.weight_sum += w;
  }
  return support;
}

double superquadric_objective(const Superquadricd& sq, const VoxelGrid& grid,
                              const ObjectiveSupport& support) {
  const GridSpec spec = grid.spec();
  const Posed pose = sq.pose();
  double sum = 0.0;
  for (std::size_t k = 0; k < support.indices.size(); ++k) {
    const std::int64_t idx = support.indices[k];
    const double model = radial_signed_distance(sq, pose, Vec3d(spec.center(idx)), grid.truncation);
    const double diff = model - double(grid[idx]);
    sum += support.weights[k] * diff * diff;
  }
  return support.weight_sum > 0.0 ? sum / support.weight_sum : 0.0;
}

FitResult fit_superquadric(const VoxelGrid& grid, const CandidateRegion& region,
                           const Superquadricd& init, const FitOptions& options) {
  const GridSpec spec = grid.spec();
  const ObjectiveSupport support =
      make_objective_support(grid, region.voxel_indices, 2, options.weight_sigma);
  const int n = int(support.indices.size());

  PointsX3d positions(n, 3);
  Eigen::VectorXd targets(n), sqrt_w(n);
  for (int k = 0; k < n; ++k) {
    positions.row(k) = spec.center(support.indices[std::size_t(k)]).transpose();
    targets[k] = double(grid[support.indices[std::size_t(k)]]);
    sqrt_w[k] = std::sqrt(support.weights[std::size_t(k)]);
  }

  const double trunc = grid.truncation;
  const auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const Superquadricd sq = unpack(x);
    const Posed pose = sq.pose();
    for (int k = 0; k < n; ++k) {
      const Vec3d p = positions.row(k).transpose();
      r[k] = sqrt_w[k] * (radial_signed_distance(sq, pose, p, trunc) - targets[k]);
    }
  };
  const double min_extent = 2.0 * spec.voxel_size;
  const auto project = [min_extent](Eigen::VectorXd& x) {
    x[0] = std::clamp(x[0], kEpsilonMin, kEpsilonMax);
    x[1] = std::clamp(x[1], kEpsilonMin, kEpsilonMax);
    for (int j = 2; j < 5; ++j) x[j] = std::max(x[j], min_extent);
    for (int j = 5; j < 8; ++j) x[j] = wrap_angle(x[j]);
  };

  LmOptions lm;
  lm.max_iters = options.max_iters;
  lm.tol = options.tol;
  const LmResult lr = levenberg_marquardt(residual, project, pack(init), n, lm);

  FitResult fit;
  fit.params = unpack(lr.x);
  fit.residual = support.weight_sum > 0.0 ? lr.cost / support.weight_sum : 0.0;
  fit.iterations = lr.iterations;
  fit.converged = lr.converged;

  const Posed pose = fit.params.pose();
  std::int64_t covered = 0;
  for (const std::int64_t idx : region.voxel_indices) {
    const double model = radial_signed_distance(fit.params, pose, Vec3d(spec.center(idx)), trunc);
    if (std::abs(model - double(grid[idx])) < spec.voxel_size) ++covered;
  }
  fit.coverage = region.size() > 0 ? double(covered) / double(region.size()) : 0.0;
  return fit;
}

namespace {

// Cyclic reassignments of the principal axes; the moment-based guess orders
// axes by extent, which need not match the target's exponent axes.
Superquadricd permute_axes(const Superquadricd& sq, int shift) {
  if (shift == 0) return sq;
  const Mat3d R = euler_xyz_to_matrix<double>(sq.euler);
  Mat3d P;
  P.col(0) = R.col(shift % 3);
  P.col(1) = R.col((shift + 1) % 3);
  P.col(2) = R.col((shift + 2) % 3);
  Superquadricd out = sq;
  out.size = Eigen::Vector3d(sq.size[shift % 3], sq.size[(shift + 1) % 3], sq.size[(shift + 2) % 3]);
  out.euler = matrix_to_euler_xyz<double>(P);
  return out;
}

void deactivate_inside(const Superquadricd& sq, const VoxelGrid& grid,
                       std::vector<std::uint8_t>& active) {
  const GridSpec spec = grid.spec();
  const Posed pose = sq.pose();
  const Eigen::Vector3d half = pose.rotation.cwiseAbs() * sq.size;
  const Eigen::Vector3d lo = sq.translation - half, hi = sq.translation + half;
  Eigen::Vector3i ilo, ihi;
  for (int k = 0; k < 3; ++k) {
    ilo[k] = std::max(0, int(std::floor((lo[k] - spec.origin[k]) / spec.voxel_size)));
    ihi[k] = std::min(spec.dims[k] - 1, int(std::ceil((hi[k] - spec.origin[k]) / spec.voxel_size)));
  }
  for (int iz = ilo.z(); iz <= ihi.z(); ++iz)
    for (int iy = ilo.y(); iy <= ihi.y(); ++iy)
      for (int ix = ilo.x(); ix <= ihi.x(); ++ix) {
        const std::int64_t idx = spec.index(ix, iy, iz);
        if (!active[std::size_t(idx)]) continue;
        const Vec3d q = pose.to_local(spec.center(ix, iy, iz));
        if (eval_implicit(sq, q) <= 1.0) active[std::size_t(idx)] = 0;
      }
}

}  // namespace

DecomposeResult decompose_detailed(const VoxelGrid& grid, const DecomposeConfig& config) {
  const GridSpec spec = grid.spec();
  const double floor_mag = config.floor > 0.0 ? config.floor : 0.5 * spec.voxel_size;
  const ThresholdSequence seq = build_threshold_sequence(grid, config.alpha, floor_mag);

  std::vector<std::uint8_t> active(std::size_t(spec.voxel_count()), 1);
  DecomposeResult out;

  // residual good enough to skip the axis-permutation restarts
  const double early_accept = 0.09 * spec.voxel_size * spec.voxel_size;

  for (const double threshold : seq.values) {
    if (int(out.primitives.size()) >= config.max_primitives) break;
    const std::vector<CandidateRegion> regions =
        extract_candidates(grid, threshold, active, config.min_voxels);

    for (const CandidateRegion& region : regions) {
      if (int(out.primitives.size()) >= config.max_primitives) break;
      const Superquadricd init = init_superquadric(region, grid);

      FitResult best = fit_superquadric(grid, region, init, config.fit);
      if (config.multi_start && best.residual > early_accept) {
        for (int shift = 1; shift < 3; ++shift) {
          const FitResult alt =
              fit_superquadric(grid, region, permute_axes(init, shift), config.fit);
          if (alt.residual < best.residual) best = alt;
        }
      }

      if (best.residual <= config.accept_residual && best.coverage >= config.accept_coverage) {
        deactivate_inside(best.params, grid, active);
        out.primitives.push_back(best.params);
        out.fits.push_back(best);
      }
    }
  }
  return out;
}

std::vector<Superquadricd> decompose(const VoxelGrid& grid, const DecomposeConfig& config) {
  return decompose_detailed(grid, config).primitives;
}

}  // namespace primforge
