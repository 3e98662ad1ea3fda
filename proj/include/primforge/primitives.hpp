// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primforge/superquadric.hpp"
#include "primforge/tsdf.hpp"

namespace primforge {

/// Shape family along the local z axis, decided by eps1.
enum class ZClass : std::uint8_t { Cylinder = 0, Cone = 1, Star = 2 };

/// Cross-section family in the local xy plane, decided by eps2.
enum class XyClass : std::uint8_t { Rect = 0, Ellipse = 1, Star = 2 };

struct ShapeClass {
  ZClass z = ZClass::Cone;
  XyClass xy = XyClass::Ellipse;

  bool operator==(const ShapeClass&) const = default;
};

/// Interval classifier: below 0.5 / in [0.5, 2] / above 2, per exponent.
/// Both boundary values fall in the middle class. Throws
/// NonPositiveEpsilon.
ShapeClass classify(double eps1, double eps2);

// enum names for tables ("Z_CYLINDER") and json tags ("cylinder")
const char* to_string(ZClass z);
const char* to_string(XyClass xy);
const char* json_name(ZClass z);
const char* json_name(XyClass xy);
ZClass z_class_from_json(const std::string& name);
XyClass xy_class_from_json(const std::string& name);

/// A classified primitive. The full superquadric parameter set is retained;
/// how much of it shapes the canonical surface depends on the class (the
/// exponents only act inside the star families and the cone profile).
struct PrimitiveRecord {
  ShapeClass shape_class;
  Superquadricd params;
};

/// The parameter-only storage artifact: classified primitives plus the
/// normalization that maps the original input into the canonical domain.
struct PrimitiveModel {
  int version = 1;
  std::optional<Normalization> normalization;
  std::vector<PrimitiveRecord> primitives;
};

/// Cross-section boundary radius at polar angle psi, in the local frame:
/// exact rectangle for Rect, exact ellipse for Ellipse, and the superellipse
/// retaining eps2 for Star.
double cross_section_radius(const PrimitiveRecord& rec, double psi);

/// Height profile g(u) scaling the cross-section at u in [-1, 1]: extrusion
/// for Cylinder, the eps1-controlled superellipse profile for Cone (eps1
/// clamped into [0.5, 2]) and Star (eps1 kept above 2).
double z_profile(const PrimitiveRecord& rec, double u);

/// Point and outward unit normal of the canonical surface at (psi, u), in
/// world coordinates. Normals are one-sided at rectangle edges, cylinder
/// rims, and star creases.
SurfaceSample<double> primitive_surface_point(const PrimitiveRecord& rec, double psi, double u);

/// True when the world point is inside the canonical primitive; with
/// strict = false boundary points count as inside.
bool primitive_contains(const PrimitiveRecord& rec, const Eigen::Vector3d& p_world,
                        bool strict = true);

/// Deterministic surface sampling on a parameter grid (plus cap rings for
/// cylinders); used as the distance proxy during refits.
PointsX3d sample_primitive_surface(const PrimitiveRecord& rec, int count);

}  // namespace primforge
