// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "primforge/errors.hpp"

namespace primforge {

namespace {

// uniform double in [0, 1) from pinned mt19937_64 output, so streams are
// reproducible across standard libraries
double unit_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PointCloud sample_mesh(const TriangleMesh& mesh, int n, std::uint64_t seed) {
  if (mesh.faces.empty()) throw DegenerateMesh("mesh has no faces to sample");

  const int nf = int(mesh.faces.size());
  std::vector<double> cumulative(static_cast<std::size_t>(nf));
  std::vector<Eigen::Vector3d> unit_normals(static_cast<std::size_t>(nf));
  double total = 0.0;
  for (int f = 0; f < nf; ++f) {
    const Eigen::Vector3d fn = face_normal(mesh, f);
    const double area = 0.5 * fn.norm();
    total += area;
    cumulative[std::size_t(f)] = total;
    unit_normals[std::size_t(f)] = area > 0.0 ? Eigen::Vector3d(fn / (2.0 * area))
                                              : Eigen::Vector3d::UnitZ();
  }
  if (!(total > 0.0)) throw DegenerateMesh("mesh has zero surface area");

  PointCloud cloud;
  cloud.points.resize(n, 3);
  cloud.normals.resize(n, 3);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    const double pick = unit_double(rng) * total;
    const int f = int(std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
                      cumulative.begin());
    const auto& face = mesh.faces[std::size_t(std::min(f, nf - 1))];
    const Eigen::Vector3d& A = mesh.vertices[std::size_t(face[0])];
    const Eigen::Vector3d& B = mesh.vertices[std::size_t(face[1])];
    const Eigen::Vector3d& C = mesh.vertices[std::size_t(face[2])];
    const double r1 = std::sqrt(unit_double(rng));
    const double r2 = unit_double(rng);
    const Eigen::Vector3d p = (1.0 - r1) * A + r1 * (1.0 - r2) * B + r1 * r2 * C;
    cloud.points.row(i) = p.transpose();
    cloud.normals.row(i) = unit_normals[std::size_t(std::min(f, nf - 1))].transpose();
  }
  return cloud;
}

}  // namespace primforge
