// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "primforge/mesh.hpp"
#include "primforge/primitives.hpp"
#include "primforge/superquadric.hpp"

namespace primforge {

/// Watertight triangulation of a superquadric from a tess x tess grid over
/// (eta, psi); the eta endpoints collapse to pole vertices. Vertex normals
/// are the analytic outward normals.
TriangleMesh tessellate_superquadric(const Superquadricd& sq, int tess);

/// Canonical-primitive counterpart over (psi, u). Cone and star profiles
/// close at apex vertices; cylinders get flat cap fans whose rim vertices
/// are duplicated so lateral and cap normals stay one-sided.
TriangleMesh tessellate_primitive(const PrimitiveRecord& rec, int tess);

/// Concatenation of all primitives as one soup. With drop_interior, vertices
/// strictly inside another primitive are removed together with their faces.
/// Throws InvalidModel when the model has no primitives.
TriangleMesh tessellate_model(const PrimitiveModel& model, int tess, bool drop_interior = false);

}  // namespace primforge
