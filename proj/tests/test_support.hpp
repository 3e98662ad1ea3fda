// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "primforge/mesh.hpp"
#include "primforge/parallel.hpp"
#include "primforge/superquadric.hpp"
#include "primforge/tsdf.hpp"
#include "primforge/voxel_grid.hpp"

namespace primforge::testing {

/// Uniform double in [0, 1) from the raw engine stream (stdlib-independent).
inline double unit_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_double(rng);
}

inline Superquadricd random_superquadric(std::mt19937_64& rng, double eps_lo = 0.3,
                                         double eps_hi = 3.0, double size_lo = 0.25,
                                         double size_hi = 0.6, double trans_range = 0.15) {
  Superquadricd sq;
  sq.eps1 = uniform(rng, eps_lo, eps_hi);
  sq.eps2 = uniform(rng, eps_lo, eps_hi);
  for (int k = 0; k < 3; ++k) sq.size[k] = uniform(rng, size_lo, size_hi);
  for (int k = 0; k < 3; ++k) sq.euler[k] = uniform(rng, -EIGEN_PI, EIGEN_PI);
  sq.euler = matrix_to_euler_xyz<double>(euler_xyz_to_matrix<double>(sq.euler));
  for (int k = 0; k < 3; ++k) sq.translation[k] = uniform(rng, -trans_range, trans_range);
  return sq;
}

/// Analytic truncated field of a union of superquadrics: min over shapes of
/// the truncated radial signed distance.
inline VoxelGrid synthesize_grid(const std::vector<Superquadricd>& shapes, const GridSpec& spec) {
  VoxelGrid grid(spec);
  std::vector<Posed> poses;
  for (const auto& s : shapes) poses.push_back(s.pose());
  parallel_for(spec.voxel_count(), [&](std::int64_t idx) {
    const Eigen::Vector3d p = spec.center(idx);
    double d = spec.truncation;
    for (std::size_t k = 0; k < shapes.size(); ++k)
      d = std::min(d, radial_signed_distance(shapes[k], poses[k], Vec3d(p), spec.truncation));
    grid[idx] = float(d);
  });
  return grid;
}

/// Exact truncated SDF of a capped circular cylinder (radius r, half-height
/// h, axis z, centred at the origin).
inline VoxelGrid synthesize_cylinder_grid(double radius, double half_height,
                                          const GridSpec& spec) {
  VoxelGrid grid(spec);
  parallel_for(spec.voxel_count(), [&](std::int64_t idx) {
    const Eigen::Vector3d p = spec.center(idx);
    const double dxy = std::hypot(p.x(), p.y()) - radius;
    const double dz = std::abs(p.z()) - half_height;
    double d;
    if (dxy <= 0.0 && dz <= 0.0) {
      d = std::max(dxy, dz);
    } else {
      d = std::hypot(std::max(dxy, 0.0), std::max(dz, 0.0));
    }
    grid[idx] = float(std::clamp(d, -spec.truncation, spec.truncation));
  });
  return grid;
}

inline TriangleMesh make_icosphere(double radius, int subdivisions,
                                   const Eigen::Vector3d& center = Eigen::Vector3d::Zero()) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<Eigen::Vector3i> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : verts) v.normalize();

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back(((verts[std::size_t(a)] + verts[std::size_t(b)]) * 0.5).normalized());
      const int id = int(verts.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh;
  for (const auto& v : verts) mesh.vertices.push_back(center + radius * v);
  mesh.faces = faces;
  return mesh;
}

inline TriangleMesh make_box_mesh(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  TriangleMesh mesh;
  for (int corner = 0; corner < 8; ++corner) {
    mesh.vertices.emplace_back(corner & 1 ? hi.x() : lo.x(), corner & 2 ? hi.y() : lo.y(),
                               corner & 4 ? hi.z() : lo.z());
  }
  // 12 triangles, outward winding
  const int quads[6][4] = {{0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4},
                           {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}};
  for (const auto& q : quads) {
    mesh.faces.emplace_back(q[0], q[1], q[2]);
    mesh.faces.emplace_back(q[0], q[2], q[3]);
  }
  return mesh;
}

inline TriangleMesh merge_meshes(const TriangleMesh& a, const TriangleMesh& b) {
  TriangleMesh out = a;
  const int base = int(out.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (const auto& f : b.faces) out.faces.emplace_back(f[0] + base, f[1] + base, f[2] + base);
  return out;
}

/// CV-convention look-at: camera at `eye` with +z toward `target`, x right,
/// y down.
inline Eigen::Matrix4d look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target) {
  const Eigen::Vector3d z = (target - eye).normalized();
  Eigen::Vector3d up(0, 0, 1);
  if (std::abs(z.dot(up)) > 0.99) up = Eigen::Vector3d(1, 0, 0);
  const Eigen::Vector3d x = z.cross(up).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 1>(0, 0) = x;
  m.block<3, 1>(0, 1) = y;
  m.block<3, 1>(0, 2) = z;
  m.block<3, 1>(0, 3) = eye;
  return m;
}

/// Ray-cast depth image of an analytic sphere; pixels that miss stay 0
/// (invalid).
inline DepthView render_sphere_view(const Eigen::Vector3d& eye, const Eigen::Vector3d& center,
                                    double radius, int wh = 256, double focal = 256.0) {
  DepthView view;
  view.width = wh;
  view.height = wh;
  view.fx = view.fy = focal;
  view.cx = view.cy = wh / 2.0;
  view.camera_to_world = look_at(eye, center);
  view.depth.assign(std::size_t(wh) * wh, 0.0f);

  const Eigen::Matrix3d R = view.camera_to_world.topLeftCorner<3, 3>();
  for (int py = 0; py < wh; ++py) {
    for (int px = 0; px < wh; ++px) {
      const Eigen::Vector3d v_cam((px + 0.5 - view.cx) / view.fx, (py + 0.5 - view.cy) / view.fy,
                                  1.0);
      const Eigen::Vector3d v = R * v_cam;
      const Eigen::Vector3d oc = eye - center;
      const double a = v.squaredNorm();
      const double b = 2.0 * v.dot(oc);
      const double c = oc.squaredNorm() - radius * radius;
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) continue;
      const double t = (-b - std::sqrt(disc)) / (2.0 * a);
      if (t <= 0.0) continue;
      view.depth[std::size_t(py) * wh + px] = float(t);  // v_cam.z == 1
    }
  }
  return view;
}

/// The ring-capture pattern used throughout: n_elev elevations at each of
/// n_azim azimuths.
inline std::vector<DepthView> make_orbit_sphere_views(const Eigen::Vector3d& center, double radius,
                                                      int n_azim = 8, int n_elev = 6,
                                                      double distance = 1.6, int wh = 256) {
  std::vector<DepthView> views;
  for (int e = 0; e < n_elev; ++e) {
    const double elev = -75.0 + 150.0 * e / (n_elev - 1);
    for (int a = 0; a < n_azim; ++a) {
      const double azim = 360.0 * a / n_azim;
      const double er = elev * EIGEN_PI / 180.0, ar = azim * EIGEN_PI / 180.0;
      const Eigen::Vector3d eye =
          center + distance * Eigen::Vector3d(std::cos(er) * std::cos(ar),
                                              std::cos(er) * std::sin(ar), std::sin(er));
      views.push_back(render_sphere_view(eye, center, radius, wh));
    }
  }
  return views;
}

/// Brute-force 26-connected components via union-find, the independent
/// oracle for extract_candidates.
inline std::vector<std::vector<std::int64_t>> brute_force_components(
    const VoxelGrid& grid, double threshold, const std::vector<std::uint8_t>& active,
    std::int64_t min_size) {
  const GridSpec spec = grid.spec();
  const std::int64_t n = spec.voxel_count();
  std::vector<std::int64_t> parent(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) parent[std::size_t(i)] = i;
  std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t x) {
    while (parent[std::size_t(x)] != x) {
      parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
      x = parent[std::size_t(x)];
    }
    return x;
  };
  auto unite = [&](std::int64_t a, std::int64_t b) { parent[std::size_t(find(a))] = find(b); };
  auto member = [&](std::int64_t i) {
    return active[std::size_t(i)] && double(grid[i]) < threshold;
  };

  for (std::int64_t i = 0; i < n; ++i) {
    if (!member(i)) continue;
    const Eigen::Vector3i c = spec.coords(i);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = c.x() + dx, y = c.y() + dy, z = c.z() + dz;
          if (!spec.contains(x, y, z)) continue;
          const std::int64_t j = spec.index(x, y, z);
          if (member(j)) unite(i, j);
        }
  }

  std::map<std::int64_t, std::vector<std::int64_t>> groups;
  for (std::int64_t i = 0; i < n; ++i)
    if (member(i)) groups[find(i)].push_back(i);

  std::vector<std::vector<std::int64_t>> out;
  for (auto& [root, members] : groups) {
    if (std::int64_t(members.size()) < min_size) continue;
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("primforge_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace primforge::testing
