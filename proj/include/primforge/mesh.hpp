// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <vector>

#include "primforge/errors.hpp"

namespace primforge {

/// Indexed triangle soup. normals is either empty or one unit vector per
/// vertex.
struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3d> normals;
  std::vector<Eigen::Vector3i> faces;

  bool has_normals() const { return !normals.empty(); }

  /// Throws DegenerateMesh / NonUnitNormal when the structural invariants are
  /// violated (indices out of range, normal count or length wrong).
  void validate() const {
    const int n = int(vertices.size());
    for (const auto& f : faces) {
      for (int k = 0; k < 3; ++k) {
        if (f[k] < 0 || f[k] >= n) throw DegenerateMesh("face index out of range");
      }
    }
    if (!normals.empty()) {
      if (normals.size() != vertices.size())
        throw DegenerateMesh("normal count does not match vertex count");
      for (const auto& nv : normals) {
        if (std::abs(nv.norm() - 1.0) > 1e-6) throw NonUnitNormal("vertex normal is not unit");
      }
    }
  }
};

inline Eigen::AlignedBox3d bounding_box(const TriangleMesh& mesh) {
  Eigen::AlignedBox3d box;
  for (const auto& v : mesh.vertices) box.extend(v);
  return box;
}

inline Eigen::Vector3d face_normal(const TriangleMesh& mesh, int face) {
  const auto& f = mesh.faces[std::size_t(face)];
  const Eigen::Vector3d e1 = mesh.vertices[std::size_t(f[1])] - mesh.vertices[std::size_t(f[0])];
  const Eigen::Vector3d e2 = mesh.vertices[std::size_t(f[2])] - mesh.vertices[std::size_t(f[0])];
  return e1.cross(e2);  // length = 2 * area
}

inline double face_area(const TriangleMesh& mesh, int face) {
  return 0.5 * face_normal(mesh, face).norm();
}

inline double surface_area(const TriangleMesh& mesh) {
  double total = 0.0;
  for (int f = 0; f < int(mesh.faces.size()); ++f) total += face_area(mesh, f);
  return total;
}

}  // namespace primforge
