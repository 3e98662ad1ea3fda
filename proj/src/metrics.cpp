// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/metrics.hpp"

#include <cmath>

#include <json.hpp>

#include "primforge/errors.hpp"
#include "primforge/kdtree.hpp"
#include "primforge/tsdf.hpp"

namespace primforge {

namespace {

void require_nonempty(const PointsX3d& P, const PointsX3d& Q) {
  if (P.rows() == 0 || Q.rows() == 0) throw EmptySet("point set is empty");
}

double mean_min_sq_dist(const PointsX3d& from, const KdTree3& to_tree) {
  double sum = 0.0;
  for (int i = 0; i < from.rows(); ++i)
    sum += to_tree.nearest(from.row(i).transpose()).sq_dist;
  return sum / double(from.rows());
}

}  // namespace

double chamfer_distance(const PointsX3d& P, const PointsX3d& Q) {
  require_nonempty(P, Q);
  const KdTree3 tq(Q), tp(P);
  return mean_min_sq_dist(P, tq) + mean_min_sq_dist(Q, tp);
}

double f1_score(const PointsX3d& P, const PointsX3d& Q, double tau) {
  require_nonempty(P, Q);
  const double tau2 = tau * tau;
  const KdTree3 tq(Q), tp(P);
  int hit_p = 0, hit_q = 0;
  for (int i = 0; i < P.rows(); ++i)
    if (tq.nearest(P.row(i).transpose()).sq_dist <= tau2) ++hit_p;
  for (int i = 0; i < Q.rows(); ++i)
    if (tp.nearest(Q.row(i).transpose()).sq_dist <= tau2) ++hit_q;
  const double precision = double(hit_p) / double(P.rows());
  const double recall = double(hit_q) / double(Q.rows());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double normal_consistency(const PointCloud& P, const PointCloud& Q) {
  require_nonempty(P.points, Q.points);
  for (const auto* cloud : {&P, &Q}) {
    for (int i = 0; i < cloud->normals.rows(); ++i) {
      if (std::abs(cloud->normals.row(i).norm() - 1.0) > 1e-6)
        throw NonUnitNormal("normal consistency requires unit normals");
    }
  }
  const KdTree3 tq(Q.points), tp(P.points);
  double sum_p = 0.0, sum_q = 0.0;
  for (int i = 0; i < P.points.rows(); ++i) {
    const int nn = tq.nearest(P.points.row(i).transpose()).index;
    sum_p += std::abs(P.normals.row(i).dot(Q.normals.row(nn)));
  }
  for (int i = 0; i < Q.points.rows(); ++i) {
    const int nn = tp.nearest(Q.points.row(i).transpose()).index;
    sum_q += std::abs(Q.normals.row(i).dot(P.normals.row(nn)));
  }
  return 0.5 * (sum_p / double(P.points.rows()) + sum_q / double(Q.points.rows()));
}

std::vector<std::uint8_t> occupancy(const VoxelGrid& grid, int resolution) {
  const GridSpec target = GridSpec::unit_domain(resolution, 1.2);
  std::vector<std::uint8_t> occ(std::size_t(target.voxel_count()), 0);
  const GridSpec src = grid.spec();
  for (std::int64_t i = 0; i < target.voxel_count(); ++i) {
    const Eigen::Vector3d p = target.center(i);
    const int ix = int(std::lround((p.x() - src.origin.x()) / src.voxel_size));
    const int iy = int(std::lround((p.y() - src.origin.y()) / src.voxel_size));
    const int iz = int(std::lround((p.z() - src.origin.z()) / src.voxel_size));
    if (!src.contains(ix, iy, iz)) continue;
    occ[std::size_t(i)] = grid.at(ix, iy, iz) < 0.0f ? 1 : 0;
  }
  return occ;
}

std::vector<std::uint8_t> occupancy(const TriangleMesh& mesh, int resolution) {
  return mesh_inside_mask(mesh, GridSpec::unit_domain(resolution, 1.2));
}

double viou_masks(const std::vector<std::uint8_t>& A, const std::vector<std::uint8_t>& B) {
  std::int64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const bool a = A[i] != 0, b = B[i] != 0;
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : double(inter) / double(uni);
}

double viou(const VoxelGrid& A, const VoxelGrid& B, int resolution) {
  return viou_masks(occupancy(A, resolution), occupancy(B, resolution));
}
double viou(const TriangleMesh& A, const TriangleMesh& B, int resolution) {
  return viou_masks(occupancy(A, resolution), occupancy(B, resolution));
}
double viou(const TriangleMesh& A, const VoxelGrid& B, int resolution) {
  return viou_masks(occupancy(A, resolution), occupancy(B, resolution));
}
double viou(const VoxelGrid& A, const TriangleMesh& B, int resolution) {
  return viou_masks(occupancy(A, resolution), occupancy(B, resolution));
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  if (cd) {
    j["cd"] = *cd;
    j["cd_scaled_e3"] = *cd * 1e3;
  }
  if (viou) j["viou"] = *viou;
  if (f1) j["f1"] = *f1;
  if (nc) j["nc"] = *nc;
  j["params"] = {{"samples", sample_count},
                 {"tau", f1_threshold},
                 {"resolution", grid_resolution},
                 {"seed", seed}};
  return j.dump();
}

}  // namespace primforge
