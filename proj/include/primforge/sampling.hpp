// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "primforge/mesh.hpp"
#include "primforge/superquadric.hpp"

namespace primforge {

struct PointCloud {
  PointsX3d points;
  PointsX3d normals;
  int size() const { return int(points.rows()); }
};

/// Area-weighted uniform surface sampling; every sample carries its face
/// normal. Deterministic per seed. Throws DegenerateMesh when the mesh has
/// no faces or zero total area.
PointCloud sample_mesh(const TriangleMesh& mesh, int n, std::uint64_t seed);

}  // namespace primforge
