// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/refit.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/kdtree.hpp"
#include "primforge/levenberg_marquardt.hpp"

namespace primforge {

namespace {

// class-consistent exponent intervals (the classifier's middle interval is
// closed, so the outer ones stay open by a hair)
constexpr double kEdge = 1e-6;

void class_bounds(ZClass z, double& lo, double& hi) {
  switch (z) {
    case ZClass::Cylinder: lo = kEpsilonMin; hi = 0.5 - kEdge; break;
    case ZClass::Cone: lo = 0.5; hi = 2.0; break;
    case ZClass::Star: lo = 2.0 + kEdge; hi = kEpsilonMax; break;
  }
}

void class_bounds(XyClass xy, double& lo, double& hi) {
  switch (xy) {
    case XyClass::Rect: lo = kEpsilonMin; hi = 0.5 - kEdge; break;
    case XyClass::Ellipse: lo = 0.5; hi = 2.0; break;
    case XyClass::Star: lo = 2.0 + kEdge; hi = kEpsilonMax; break;
  }
}

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

double record_objective(const PrimitiveRecord& rec, const VoxelGrid& grid,
                        const ObjectiveSupport& support, int surface_samples) {
  const GridSpec spec = grid.spec();
  const double trunc = grid.truncation;
  const KdTree3 tree(sample_primitive_surface(rec, surface_samples));

  double sum = 0.0;
  for (std::size_t k = 0; k < support.indices.size(); ++k) {
    const std::int64_t idx = support.indices[k];
    const Eigen::Vector3d p = spec.center(idx);
    const KdTree3::Hit hit = tree.nearest_within(p, trunc * trunc * 4.0);
    double model;
    if (hit.index < 0) {
      model = primitive_contains(rec, p, false) ? -trunc : trunc;
    } else {
      const double d = std::sqrt(hit.sq_dist);
      model = std::clamp(primitive_contains(rec, p, false) ? -d : d, -trunc, trunc);
    }
    const double diff = model - double(grid[idx]);
    sum += support.weights[k] * diff * diff;
  }
  return support.weight_sum > 0.0 ? sum / support.weight_sum : 0.0;
}

ObjectiveSupport replacement_support(const Superquadricd& sq, const VoxelGrid& grid,
                                     double weight_sigma) {
  const GridSpec spec = grid.spec();
  const Posed pose = sq.pose();
  const Eigen::Vector3d half = pose.rotation.cwiseAbs() * sq.size;
  const Eigen::Vector3d lo = sq.translation - half, hi = sq.translation + half;
  Eigen::Vector3i ilo, ihi;
  for (int k = 0; k < 3; ++k) {
    ilo[k] = std::max(0, int(std::floor((lo[k] - spec.origin[k]) / spec.voxel_size)));
    ihi[k] = std::min(spec.dims[k] - 1, int(std::ceil((hi[k] - spec.origin[k]) / spec.voxel_size)));
  }
  std::vector<std::int64_t> seeds;
  for (int iz = ilo.z(); iz <= ihi.z(); ++iz)
    for (int iy = ilo.y(); iy <= ihi.y(); ++iy)
      for (int ix = ilo.x(); ix <= ihi.x(); ++ix) {
        const Vec3d q = pose.to_local(spec.center(ix, iy, iz));
        if (eval_implicit(sq, q) <= 1.0) seeds.push_back(spec.index(ix, iy, iz));
      }
  return make_objective_support(grid, seeds, 2, weight_sigma);
}

RefitResult replace_and_refit(const Superquadricd& sq, const VoxelGrid& grid,
                              const RefitOptions& options) {
  const GridSpec spec = grid.spec();
  RefitResult result;
  result.record.shape_class = classify(sq.eps1, sq.eps2);
  result.record.params = sq;

  const ObjectiveSupport support = replacement_support(sq, grid, options.weight_sigma);
  result.sq_objective = superquadric_objective(sq, grid, support);
  if (support.indices.empty()) {
    // nothing to optimize against; attach the class and keep the geometry
    result.record_objective = result.sq_objective;
    return result;
  }

  double e1_lo, e1_hi, e2_lo, e2_hi;
  class_bounds(result.record.shape_class.z, e1_lo, e1_hi);
  class_bounds(result.record.shape_class.xy, e2_lo, e2_hi);

  const int n = int(support.indices.size());
  PointsX3d positions(n, 3);
  Eigen::VectorXd targets(n), sqrt_w(n);
  for (int k = 0; k < n; ++k) {
    positions.row(k) = spec.center(support.indices[std::size_t(k)]).transpose();
    targets[k] = double(grid[support.indices[std::size_t(k)]]);
    sqrt_w[k] = std::sqrt(support.weights[std::size_t(k)]);
  }

  const double trunc = grid.truncation;
  const ShapeClass cls = result.record.shape_class;
  const auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    PrimitiveRecord rec{cls, unpack(x)};
    const KdTree3 tree(sample_primitive_surface(rec, options.surface_samples));
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector3d p = positions.row(k).transpose();
      const KdTree3::Hit hit = tree.nearest_within(p, trunc * trunc * 4.0);
      double model;
      if (hit.index < 0) {
        model = primitive_contains(rec, p, false) ? -trunc : trunc;
      } else {
        const double d = std::sqrt(hit.sq_dist);
        model = std::clamp(primitive_contains(rec, p, false) ? -d : d, -trunc, trunc);
      }
      r[k] = sqrt_w[k] * (model - targets[k]);
    }
  };
  const double min_extent = 2.0 * spec.voxel_size;
  const auto project = [&](Eigen::VectorXd& x) {
    x[0] = std::clamp(x[0], e1_lo, e1_hi);
    x[1] = std::clamp(x[1], e2_lo, e2_hi);
    for (int j = 2; j < 5; ++j) x[j] = std::max(x[j], min_extent);
    for (int j = 5; j < 8; ++j) x[j] = wrap_angle(x[j]);
  };

  LmOptions lm;
  lm.max_iters = options.max_iters;
  lm.tol = options.tol;
  const LmResult lr = levenberg_marquardt(residual, project, pack(sq), n, lm);
  result.iterations = lr.iterations;

  PrimitiveRecord refit{cls, unpack(lr.x)};
  const double refit_objective = record_objective(refit, grid, support, options.surface_samples);

  if (refit_objective <= options.fallback_factor * result.sq_objective) {
    result.record = refit;
    result.record_objective = refit_objective;
    result.refit_applied = true;
  } else {
    // fallback: geometry stays the superquadric's, so its objective stands
    result.record_objective = result.sq_objective;
  }
  return result;
}

}  // namespace primforge
