// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "primforge/mesh.hpp"

namespace primforge {

/// Wavefront OBJ subset: v, vn, and f records (with v, v/vt, v//vn and
/// v/vt/vn corners; texture indices are ignored). Polygon faces are
/// fan-triangulated. Malformed records raise ParseError with the line
/// number.
TriangleMesh read_obj(std::istream& in, const std::string& name = "<stream>");
TriangleMesh read_obj(const std::string& path);

/// Emits v / vn / f with 9-significant-digit coordinates, so a write/read
/// round trip preserves normalized-scale geometry to 1e-8.
void write_obj(const TriangleMesh& mesh, std::ostream& out);
void write_obj(const TriangleMesh& mesh, const std::string& path);

}  // namespace primforge
