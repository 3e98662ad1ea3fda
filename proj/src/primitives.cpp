// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/primitives.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/errors.hpp"

namespace primforge {

ShapeClass classify(double eps1, double eps2) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0))
    throw NonPositiveEpsilon("shape exponents must be positive");
  ShapeClass c;
  c.z = eps1 < 0.5 ? ZClass::Cylinder : (eps1 <= 2.0 ? ZClass::Cone : ZClass::Star);
  c.xy = eps2 < 0.5 ? XyClass::Rect : (eps2 <= 2.0 ? XyClass::Ellipse : XyClass::Star);
  return c;
}

const char* to_string(ZClass z) {
  switch (z) {
    case ZClass::Cylinder: return "Z_CYLINDER";
    case ZClass::Cone: return "Z_CONE";
    case ZClass::Star: return "Z_STAR";
  }
  return "?";
}

const char* to_string(XyClass xy) {
  switch (xy) {
    case XyClass::Rect: return "XY_RECT";
    case XyClass::Ellipse: return "XY_ELLIPSE";
    case XyClass::Star: return "XY_STAR";
  }
  return "?";
}

const char* json_name(ZClass z) {
  switch (z) {
    case ZClass::Cylinder: return "cylinder";
    case ZClass::Cone: return "cone";
    case ZClass::Star: return "star";
  }
  return "?";
}

const char* json_name(XyClass xy) {
  switch (xy) {
    case XyClass::Rect: return "rect";
    case XyClass::Ellipse: return "ellipse";
    case XyClass::Star: return "star";
  }
  return "?";
}

ZClass z_class_from_json(const std::string& name) {
  if (name == "cylinder") return ZClass::Cylinder;
  if (name == "cone") return ZClass::Cone;
  if (name == "star") return ZClass::Star;
  throw InvalidClassTag("unknown z_class '" + name + "'");
}

XyClass xy_class_from_json(const std::string& name) {
  if (name == "rect") return XyClass::Rect;
  if (name == "ellipse") return XyClass::Ellipse;
  if (name == "star") return XyClass::Star;
  throw InvalidClassTag("unknown xy_class '" + name + "'");
}

namespace {

constexpr double kTiny = 1e-12;

double cone_exponent(const PrimitiveRecord& rec) {
  return rec.shape_class.z == ZClass::Star ? std::max(rec.params.eps1, 2.0)
                                           : std::clamp(rec.params.eps1, 0.5, 2.0);
}

// dr/dpsi of the cross-section boundary (one-sided at rectangle edges and
// star creases)
double cross_section_radius_deriv(const PrimitiveRecord& rec, double psi) {
  const double a = rec.params.size.x(), b = rec.params.size.y();
  const double c = std::cos(psi), s = std::sin(psi);
  switch (rec.shape_class.xy) {
    case XyClass::Rect: {
      if (std::abs(c) / a >= std::abs(s) / b) {
        const double cc = std::abs(c) < kTiny ? kTiny : c;
        return a * s * (c < 0 ? -1.0 : 1.0) / (cc * cc);
      }
      const double ss = std::abs(s) < kTiny ? kTiny : s;
      return -b * c * (s < 0 ? -1.0 : 1.0) / (ss * ss);
    }
    case XyClass::Ellipse: {
      const double D = b * b * c * c + a * a * s * s;
      return a * b * c * s * (b * b - a * a) * std::pow(D, -1.5);
    }
    case XyClass::Star: {
      const double e2 = std::max(rec.params.eps2, kEpsilonMin);
      const double q = 2.0 / e2;
      const double ca = std::max(std::abs(c) / a, kTiny);
      const double sb = std::max(std::abs(s) / b, kTiny);
      const double F = std::pow(ca, q) + std::pow(sb, q);
      const double dA = -q * (s / a) * std::pow(ca, q - 1.0) * (c < 0 ? -1.0 : 1.0);
      const double dB = q * (c / b) * std::pow(sb, q - 1.0) * (s < 0 ? -1.0 : 1.0);
      return -0.5 * e2 * std::pow(F, -0.5 * e2 - 1.0) * (dA + dB);
    }
  }
  return 0.0;
}

double z_profile_deriv(const PrimitiveRecord& rec, double u) {
  if (rec.shape_class.z == ZClass::Cylinder) return 0.0;
  const double e = cone_exponent(rec);
  const double au = std::clamp(std::abs(u), kTiny, 1.0 - kTiny);
  const double base = 1.0 - std::pow(au, 2.0 / e);
  return -(u < 0 ? -1.0 : 1.0) * std::pow(au, 2.0 / e - 1.0) * std::pow(base, 0.5 * e - 1.0);
}

}  // namespace

double cross_section_radius(const PrimitiveRecord& rec, double psi) {
  const double a = rec.params.size.x(), b = rec.params.size.y();
  const double c = std::cos(psi), s = std::sin(psi);
  switch (rec.shape_class.xy) {
    case XyClass::Rect:
      return 1.0 / std::max(std::abs(c) / a, std::abs(s) / b);
    case XyClass::Ellipse:
      return a * b / std::sqrt(b * b * c * c + a * a * s * s);
    case XyClass::Star: {
      const double e2 = std::max(rec.params.eps2, kEpsilonMin);
      const double q = 2.0 / e2;
      const double F = std::pow(std::abs(c) / a, q) + std::pow(std::abs(s) / b, q);
      return std::pow(F, -0.5 * e2);
    }
  }
  return 0.0;
}

double z_profile(const PrimitiveRecord& rec, double u) {
  if (rec.shape_class.z == ZClass::Cylinder) return 1.0;
  const double e = cone_exponent(rec);
  const double au = std::min(std::abs(u), 1.0);
  const double base = std::max(1.0 - std::pow(au, 2.0 / e), 0.0);
  return std::pow(base, 0.5 * e);
}

SurfaceSample<double> primitive_surface_point(const PrimitiveRecord& rec, double psi, double u) {
  const Posed pose = rec.params.pose();
  const double cz = rec.params.size.z();
  const double cp = std::cos(psi), sp = std::sin(psi);
  const double r = cross_section_radius(rec, psi);
  const double g = z_profile(rec, u);

  const Eigen::Vector3d p_local(g * r * cp, g * r * sp, cz * u);

  Eigen::Vector3d n_local;
  if (g < kTiny) {
    // cone / star apex
    n_local = Eigen::Vector3d(0, 0, u < 0 ? -1.0 : 1.0);
  } else {
    // cross(dP/dpsi, dP/du) with P = (g r cos, g r sin, c u)
    const double dr = cross_section_radius_deriv(rec, psi);
    const double dg = z_profile_deriv(rec, u);
    const double A = dr * cp - r * sp;
    const double B = dr * sp + r * cp;
    n_local = Eigen::Vector3d(B * cz, -A * cz, -dg * r * r);
    const double len = n_local.norm();
    if (len > 0.0 && std::isfinite(len)) {
      n_local /= len;
    } else {
      n_local = Eigen::Vector3d(cp, sp, 0).normalized();
    }
  }
  return {pose.to_world(p_local), pose.rotation * n_local};
}

bool primitive_contains(const PrimitiveRecord& rec, const Eigen::Vector3d& p_world, bool strict) {
  const Eigen::Vector3d q = rec.params.pose().to_local(p_world);
  const double cz = rec.params.size.z();
  const double uz = q.z() / cz;
  if (strict ? std::abs(uz) >= 1.0 : std::abs(uz) > 1.0) return false;
  const double rho = std::hypot(q.x(), q.y());
  const double boundary = cross_section_radius(rec, std::atan2(q.y(), q.x())) * z_profile(rec, uz);
  return strict ? rho < boundary : rho <= boundary;
}

PointsX3d sample_primitive_surface(const PrimitiveRecord& rec, int count) {
  const Posed pose = rec.params.pose();
  const double cz = rec.params.size.z();
  const bool capped = rec.shape_class.z == ZClass::Cylinder;

  const int cols = std::max(4, int(std::lround(std::sqrt(double(count)))));
  const int cap_each = capped ? std::max(cols, count / 16) : 0;
  const int lateral = std::max(cols, count - 2 * cap_each);
  const int rows = std::max(2, lateral / cols);

  std::vector<Eigen::Vector3d> pts;
  pts.reserve(std::size_t(rows) * cols + 2 * std::size_t(cap_each));

  for (int j = 0; j < rows; ++j) {
    const double u = -1.0 + (j + 0.5) * 2.0 / rows;
    const double g = z_profile(rec, u);
    for (int i = 0; i < cols; ++i) {
      const double psi = -EIGEN_PI + (i + 0.5) * 2.0 * EIGEN_PI / cols;
      const double r = g * cross_section_radius(rec, psi);
      pts.push_back(pose.to_world(Eigen::Vector3d(r * std::cos(psi), r * std::sin(psi), cz * u)));
    }
  }

  if (capped) {
    // sunflower layout over each cap disk, scaled by the boundary radius
    constexpr double golden = 2.39996322972865332;  // radians
    for (int side = -1; side <= 1; side += 2) {
      for (int k = 0; k < cap_each; ++k) {
        const double fr = std::sqrt((k + 0.5) / cap_each);
        const double ang = k * golden;
        const double r = fr * cross_section_radius(rec, ang);
        pts.push_back(pose.to_world(
            Eigen::Vector3d(r * std::cos(ang), r * std::sin(ang), side * cz)));
      }
    }
  }

  PointsX3d out(int(pts.size()), 3);
  for (int i = 0; i < int(pts.size()); ++i) out.row(i) = pts[std::size_t(i)].transpose();
  return out;
}

}  // namespace primforge
