// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/tsdf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "primforge/errors.hpp"
#include "primforge/parallel.hpp"

namespace primforge {

void DepthView::validate() const {
  if (width <= 0 || height <= 0 || std::size_t(width) * height != depth.size())
    throw BadPose("depth image dimensions do not match the pixel buffer");
  if (!(fx > 0.0) || !(fy > 0.0)) throw BadPose("focal lengths must be positive");
  const Eigen::Matrix3d R = camera_to_world.topLeftCorner<3, 3>();
  const double ortho = (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-6 || std::abs(R.determinant() - 1.0) > 1e-6)
    throw BadPose("camera rotation is not orthonormal with determinant +1");
}

VoxelGrid fuse_depth_views(const std::vector<DepthView>& views, const GridSpec& spec) {
  if (views.empty()) throw EmptyViews("no depth views to fuse");
  for (const auto& v : views) v.validate();

  struct CamData {
    Eigen::Matrix3d R_wc;
    Eigen::Vector3d t_wc;
  };
  std::vector<CamData> cams(views.size());
  for (std::size_t i = 0; i < views.size(); ++i) {
    const Eigen::Matrix3d R = views[i].camera_to_world.topLeftCorner<3, 3>();
    const Eigen::Vector3d t = views[i].camera_to_world.topRightCorner<3, 1>();
    cams[i].R_wc = R.transpose();
    cams[i].t_wc = -(R.transpose() * t);
  }

  VoxelGrid grid(spec);
  const double trunc = spec.truncation;
  parallel_for(spec.voxel_count(), [&](std::int64_t idx) {
    const Eigen::Vector3d p = spec.center(idx);
    double sum = 0.0;
    int count = 0;
    for (std::size_t v = 0; v < views.size(); ++v) {
      const DepthView& view = views[v];
      const Eigen::Vector3d pc = cams[v].R_wc * p + cams[v].t_wc;
      if (pc.z() <= 0.0) continue;
      const int px = int(std::lround(view.fx * pc.x() / pc.z() + view.cx));
      const int py = int(std::lround(view.fy * pc.y() / pc.z() + view.cy));
      if (px < 0 || py < 0 || px >= view.width || py >= view.height) continue;
      const float d = view.depth_at(px, py);
      if (!(d > 0.0f) || !std::isfinite(d)) continue;
      const double sdf = double(d) - pc.z();
      // deeper than the truncation band behind the surface means occluded,
      // not observed
      if (sdf < -trunc) continue;
      sum += std::min(sdf, trunc);
      ++count;
    }
    if (count > 0) grid[idx] = float(sum / count);
  });
  return grid;
}

namespace {

// Ericson-style closest point on a triangle; returns squared distance.
double point_triangle_sq_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                  const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.squaredNorm();

  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.squaredNorm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double t = d1 / (d1 - d3);
    return (ap - t * ab).squaredNorm();
  }

  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.squaredNorm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double t = d2 / (d2 - d6);
    return (ap - t * ac).squaredNorm();
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (bp - t * (c - b)).squaredNorm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (ap - ab * v - ac * w).squaredNorm();
}

// Parity votes per voxel along the three grid axes. For each axis a ray is
// cast through the voxel centres (jittered off exact grid alignment) and
// surface crossings are counted; odd count behind the centre means inside.
std::vector<std::uint8_t> parity_votes(const TriangleMesh& mesh, const GridSpec& spec) {
  const std::int64_t n = spec.voxel_count();
  std::vector<std::uint8_t> votes(std::size_t(n), 0);

  // axis = ray direction; u, v = the two transverse axes
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    const int nu = spec.dims[u], nv = spec.dims[v], nr = spec.dims[axis];
    const double jitter_u = 1.3e-5 * spec.voxel_size * (axis + 1);
    const double jitter_v = 0.7e-5 * spec.voxel_size * (axis + 1);

    // bin triangles by transverse bbox so each ray only tests local ones
    std::vector<std::vector<int>> bins(std::size_t(nu) * nv);
    for (int f = 0; f < int(mesh.faces.size()); ++f) {
      const auto& face = mesh.faces[std::size_t(f)];
      const Eigen::Vector3d& p0 = mesh.vertices[std::size_t(face[0])];
      const Eigen::Vector3d& p1 = mesh.vertices[std::size_t(face[1])];
      const Eigen::Vector3d& p2 = mesh.vertices[std::size_t(face[2])];
      const double ulo = std::min({p0[u], p1[u], p2[u]}), uhi = std::max({p0[u], p1[u], p2[u]});
      const double vlo = std::min({p0[v], p1[v], p2[v]}), vhi = std::max({p0[v], p1[v], p2[v]});
      const int iu0 = std::max(0, int(std::ceil((ulo - jitter_u - spec.origin[u]) / spec.voxel_size - 1e-9)));
      const int iu1 = std::min(nu - 1, int(std::floor((uhi - jitter_u - spec.origin[u]) / spec.voxel_size + 1e-9)));
      const int iv0 = std::max(0, int(std::ceil((vlo - jitter_v - spec.origin[v]) / spec.voxel_size - 1e-9)));
      const int iv1 = std::min(nv - 1, int(std::floor((vhi - jitter_v - spec.origin[v]) / spec.voxel_size + 1e-9)));
      for (int iv = iv0; iv <= iv1; ++iv)
        for (int iu = iu0; iu <= iu1; ++iu) bins[std::size_t(iv) * nu + iu].push_back(f);
    }

    parallel_for(std::int64_t(nu) * nv, [&](std::int64_t ray) {
      const int iu = int(ray % nu), iv = int(ray / nu);
      const auto& candidates = bins[std::size_t(ray)];
      if (candidates.empty()) return;
      const double ru = spec.origin[u] + iu * spec.voxel_size + jitter_u;
      const double rv = spec.origin[v] + iv * spec.voxel_size + jitter_v;

      std::vector<double> crossings;
      for (int f : candidates) {
        const auto& face = mesh.faces[std::size_t(f)];
        const Eigen::Vector3d& p0 = mesh.vertices[std::size_t(face[0])];
        const Eigen::Vector3d& p1 = mesh.vertices[std::size_t(face[1])];
        const Eigen::Vector3d& p2 = mesh.vertices[std::size_t(face[2])];
        // 2D barycentric test in the transverse plane
        const double au = p0[u] - ru, av = p0[v] - rv;
        const double bu = p1[u] - ru, bv = p1[v] - rv;
        const double cu = p2[u] - ru, cv = p2[v] - rv;
        const double d0 = au * bv - av * bu;
        const double d1 = bu * cv - bv * cu;
        const double d2 = cu * av - cv * au;
        const bool pos = d0 > 0 && d1 > 0 && d2 > 0;
        const bool neg = d0 < 0 && d1 < 0 && d2 < 0;
        if (!pos && !neg) continue;
        const double area = d0 + d1 + d2;
        // barycentric interpolation of the along-ray coordinate
        const double t = (d1 * p0[axis] + d2 * p1[axis] + d0 * p2[axis]) / area;
        crossings.push_back(t);
      }
      if (crossings.empty()) return;
      std::sort(crossings.begin(), crossings.end());

      std::size_t k = 0;
      Eigen::Vector3i c;
      c[u] = iu;
      c[v] = iv;
      for (int ir = 0; ir < nr; ++ir) {
        const double rc = spec.origin[axis] + ir * spec.voxel_size;
        while (k < crossings.size() && crossings[k] < rc) ++k;
        if (k % 2 == 1) {
          c[axis] = ir;
          votes[std::size_t(spec.index(c.x(), c.y(), c.z()))] += 1;
        }
      }
    });
  }
  return votes;
}

}  // namespace

std::vector<std::uint8_t> mesh_inside_mask(const TriangleMesh& mesh, const GridSpec& spec) {
  if (mesh.faces.empty()) throw DegenerateMesh("mesh has no triangles");
  std::vector<std::uint8_t> votes = parity_votes(mesh, spec);
  std::vector<std::uint8_t> inside(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) inside[i] = votes[i] >= 2 ? 1 : 0;
  return inside;
}

VoxelGrid voxelize_mesh(const TriangleMesh& mesh, const GridSpec& spec, VoxelizeStats* stats) {
  if (mesh.faces.empty()) throw DegenerateMesh("mesh has no triangles");

  const double trunc = spec.truncation;
  const std::int64_t n = spec.voxel_count();
  std::vector<double> sq_dist(std::size_t(n), std::numeric_limits<double>::infinity());

  // Exact distances are only needed within the truncation band, so each
  // triangle touches just the voxels inside its bbox expanded by the
  // truncation. Triangles are bucketed per z-slab and slabs are processed in
  // parallel; min() makes the result schedule-independent.
  const int nz = spec.dims.z();
  std::vector<std::vector<int>> slabs(static_cast<std::size_t>(nz));
  const double expand = trunc + 1e-12;
  for (int f = 0; f < int(mesh.faces.size()); ++f) {
    const auto& face = mesh.faces[std::size_t(f)];
    const Eigen::Vector3d& p0 = mesh.vertices[std::size_t(face[0])];
    const Eigen::Vector3d& p1 = mesh.vertices[std::size_t(face[1])];
    const Eigen::Vector3d& p2 = mesh.vertices[std::size_t(face[2])];
    const double zlo = std::min({p0.z(), p1.z(), p2.z()}) - expand;
    const double zhi = std::max({p0.z(), p1.z(), p2.z()}) + expand;
    const int iz0 = std::max(0, int(std::ceil((zlo - spec.origin.z()) / spec.voxel_size)));
    const int iz1 = std::min(nz - 1, int(std::floor((zhi - spec.origin.z()) / spec.voxel_size)));
    for (int iz = iz0; iz <= iz1; ++iz) slabs[std::size_t(iz)].push_back(f);
  }

  parallel_for(nz, [&](std::int64_t izl) {
    const int iz = int(izl);
    for (int f : slabs[std::size_t(iz)]) {
      const auto& face = mesh.faces[std::size_t(f)];
      const Eigen::Vector3d& p0 = mesh.vertices[std::size_t(face[0])];
      const Eigen::Vector3d& p1 = mesh.vertices[std::size_t(face[1])];
      const Eigen::Vector3d& p2 = mesh.vertices[std::size_t(face[2])];
      const double xlo = std::min({p0.x(), p1.x(), p2.x()}) - expand;
      const double xhi = std::max({p0.x(), p1.x(), p2.x()}) + expand;
      const double ylo = std::min({p0.y(), p1.y(), p2.y()}) - expand;
      const double yhi = std::max({p0.y(), p1.y(), p2.y()}) + expand;
      const int ix0 = std::max(0, int(std::ceil((xlo - spec.origin.x()) / spec.voxel_size)));
      const int ix1 = std::min(spec.dims.x() - 1, int(std::floor((xhi - spec.origin.x()) / spec.voxel_size)));
      const int iy0 = std::max(0, int(std::ceil((ylo - spec.origin.y()) / spec.voxel_size)));
      const int iy1 = std::min(spec.dims.y() - 1, int(std::floor((yhi - spec.origin.y()) / spec.voxel_size)));
      for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
          const std::int64_t idx = spec.index(ix, iy, iz);
          const double d2 = point_triangle_sq_distance(spec.center(ix, iy, iz), p0, p1, p2);
          if (d2 < sq_dist[std::size_t(idx)]) sq_dist[std::size_t(idx)] = d2;
        }
      }
    }
  });

  const std::vector<std::uint8_t> votes = parity_votes(mesh, spec);

  VoxelGrid grid(spec);
  std::atomic<std::int64_t> near_surface{0}, conflicts{0};
  parallel_for_ranges(n, [&](std::int64_t begin, std::int64_t end) {
    std::int64_t local_near = 0, local_conf = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      const double d = std::min(std::sqrt(sq_dist[std::size_t(i)]), trunc);
      const bool inside = votes[std::size_t(i)] >= 2;
      grid[i] = float(inside ? -d : d);
      if (d < trunc) {
        ++local_near;
        if (votes[std::size_t(i)] == 1 || votes[std::size_t(i)] == 2) ++local_conf;
      }
    }
    near_surface += local_near;
    conflicts += local_conf;
  });

  if (stats) {
    stats->near_surface_voxels = near_surface.load();
    stats->sign_conflicts = conflicts.load();
  }
  return grid;
}

Normalization normalize_mesh(TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw DegenerateMesh("mesh has no vertices");
  const Eigen::AlignedBox3d box = bounding_box(mesh);
  const double longest = box.sizes().maxCoeff();
  if (!(longest > 0.0)) throw DegenerateMesh("mesh has zero extent");
  Normalization norm;
  norm.center = box.center();
  norm.scale = 1.8 / longest;
  for (auto& v : mesh.vertices) v = norm.apply(v);
  return norm;
}

}  // namespace primforge
