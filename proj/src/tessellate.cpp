// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/tessellate.hpp"

#include <cmath>

#include "primforge/errors.hpp"

namespace primforge {

namespace {

// Shared lateral-grid triangulation. row_vertex(j, i) yields the vertex id
// for grid row j (0..rows) and column i (0..cols-1, wrapping); rows 0 and
// `rows` may be poles, in which case every i maps to the same id.
struct LateralGrid {
  int rows = 0, cols = 0;
  bool bottom_pole = false, top_pole = false;
  std::vector<int> ids;  // (rows+1) * cols vertex ids
  int id(int j, int i) const { return ids[std::size_t(j) * cols + (i % cols)]; }
};

void triangulate_lateral(const LateralGrid& g, TriangleMesh& mesh) {
  const int rows = g.rows, cols = g.cols;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      const int v00 = g.id(j, i), v10 = g.id(j, i + 1);
      const int v01 = g.id(j + 1, i), v11 = g.id(j + 1, i + 1);
      if (j == 0 && g.bottom_pole) {
        mesh.faces.emplace_back(v00, v11, v01);
      } else if (j == rows - 1 && g.top_pole) {
        mesh.faces.emplace_back(v01, v00, v10);
      } else {
        mesh.faces.emplace_back(v00, v10, v11);
        mesh.faces.emplace_back(v00, v11, v01);
      }
    }
  }
}

int push_vertex(TriangleMesh& mesh, const Eigen::Vector3d& p, const Eigen::Vector3d& n) {
  mesh.vertices.push_back(p);
  mesh.normals.push_back(n);
  return int(mesh.vertices.size()) - 1;
}

}  // namespace

TriangleMesh tessellate_superquadric(const Superquadricd& sq, int tess) {
  TriangleMesh mesh;
  const Posed pose = sq.pose();
  LateralGrid grid;
  grid.rows = tess;
  grid.cols = tess;
  grid.bottom_pole = grid.top_pole = true;
  grid.ids.resize(std::size_t(tess + 1) * tess);

  for (int j = 0; j <= tess; ++j) {
    const double eta = -EIGEN_PI / 2 + EIGEN_PI * j / tess;
    if (j == 0 || j == tess) {
      const SurfaceSample<double> s = surface_point(sq, pose, eta, 0.0);
      const int id = push_vertex(mesh, s.position, s.normal);
      for (int i = 0; i < tess; ++i) grid.ids[std::size_t(j) * tess + i] = id;
      continue;
    }
    for (int i = 0; i < tess; ++i) {
      const double psi = -EIGEN_PI + 2.0 * EIGEN_PI * i / tess;
      const SurfaceSample<double> s = surface_point(sq, pose, eta, psi);
      grid.ids[std::size_t(j) * tess + i] = push_vertex(mesh, s.position, s.normal);
    }
  }
  triangulate_lateral(grid, mesh);
  return mesh;
}

TriangleMesh tessellate_primitive(const PrimitiveRecord& rec, int tess) {
  TriangleMesh mesh;
  const Posed pose = rec.params.pose();
  const bool capped = rec.shape_class.z == ZClass::Cylinder;

  LateralGrid grid;
  grid.rows = tess;
  grid.cols = tess;
  grid.bottom_pole = grid.top_pole = !capped;
  grid.ids.resize(std::size_t(tess + 1) * tess);

  for (int j = 0; j <= tess; ++j) {
    const double u = -1.0 + 2.0 * j / tess;
    if (!capped && (j == 0 || j == tess)) {
      const SurfaceSample<double> s = primitive_surface_point(rec, 0.0, u);
      const int id = push_vertex(mesh, s.position, s.normal);
      for (int i = 0; i < tess; ++i) grid.ids[std::size_t(j) * tess + i] = id;
      continue;
    }
    for (int i = 0; i < tess; ++i) {
      const double psi = -EIGEN_PI + 2.0 * EIGEN_PI * i / tess;
      const SurfaceSample<double> s = primitive_surface_point(rec, psi, u);
      grid.ids[std::size_t(j) * tess + i] = push_vertex(mesh, s.position, s.normal);
    }
  }
  triangulate_lateral(grid, mesh);

  if (capped) {
    const double cz = rec.params.size.z();
    for (int side = -1; side <= 1; side += 2) {
      const Eigen::Vector3d n_world = pose.rotation * Eigen::Vector3d(0, 0, side);
      const int center =
          push_vertex(mesh, pose.to_world(Eigen::Vector3d(0, 0, side * cz)), n_world);
      std::vector<int> rim(static_cast<std::size_t>(tess));
      for (int i = 0; i < tess; ++i) {
        const double psi = -EIGEN_PI + 2.0 * EIGEN_PI * i / tess;
        const double r = cross_section_radius(rec, psi);
        const Eigen::Vector3d p(r * std::cos(psi), r * std::sin(psi), side * cz);
        rim[std::size_t(i)] = push_vertex(mesh, pose.to_world(p), n_world);
      }
      for (int i = 0; i < tess; ++i) {
        const int a = rim[std::size_t(i)], b = rim[std::size_t((i + 1) % tess)];
        if (side > 0) {
          mesh.faces.emplace_back(center, a, b);
        } else {
          mesh.faces.emplace_back(center, b, a);
        }
      }
    }
  }
  return mesh;
}

TriangleMesh tessellate_model(const PrimitiveModel& model, int tess, bool drop_interior) {
  if (model.primitives.empty()) throw InvalidModel("model has no primitives");
  TriangleMesh mesh;
  std::vector<int> owner;  // primitive index per vertex
  for (int k = 0; k < int(model.primitives.size()); ++k) {
    const TriangleMesh part = tessellate_primitive(model.primitives[std::size_t(k)], tess);
    const int base = int(mesh.vertices.size());
    mesh.vertices.insert(mesh.vertices.end(), part.vertices.begin(), part.vertices.end());
    mesh.normals.insert(mesh.normals.end(), part.normals.begin(), part.normals.end());
    owner.insert(owner.end(), part.vertices.size(), k);
    for (const auto& f : part.faces)
      mesh.faces.emplace_back(f[0] + base, f[1] + base, f[2] + base);
  }

  if (!drop_interior) return mesh;

  std::vector<int> remap(mesh.vertices.size(), -1);
  TriangleMesh pruned;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    bool interior = false;
    for (int k = 0; k < int(model.primitives.size()) && !interior; ++k) {
      if (k == owner[v]) continue;
      interior = primitive_contains(model.primitives[std::size_t(k)], mesh.vertices[v], true);
    }
    if (!interior) {
      remap[v] = int(pruned.vertices.size());
      pruned.vertices.push_back(mesh.vertices[v]);
      pruned.normals.push_back(mesh.normals[v]);
    }
  }
  for (const auto& f : mesh.faces) {
    const int a = remap[std::size_t(f[0])], b = remap[std::size_t(f[1])], c = remap[std::size_t(f[2])];
    if (a >= 0 && b >= 0 && c >= 0) pruned.faces.emplace_back(a, b, c);
  }
  return pruned;
}

}  // namespace primforge
