// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace primforge {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using PointsX3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using PointsX3d = PointsX3<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Shape-exponent bounds. Below 0.05 the fractional powers overflow double
/// range; 6.0 covers the star classes with margin.
inline constexpr double kEpsilonMin = 0.05;
inline constexpr double kEpsilonMax = 6.0;

/// Wraps an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  Scalar w = std::remainder(a, two_pi);  // lands in [-pi, pi]
  if (w == Scalar(-EIGEN_PI)) w = Scalar(EIGEN_PI);
  return w;
}

/// Intrinsic X-then-Y-then-Z Euler angles to a rotation matrix.
template <typename Scalar>
Mat3<Scalar> euler_xyz_to_matrix(const Vec3<Scalar>& euler) {
  using AA = Eigen::AngleAxis<Scalar>;
  return (AA(euler.x(), Vec3<Scalar>::UnitX()) * AA(euler.y(), Vec3<Scalar>::UnitY()) *
          AA(euler.z(), Vec3<Scalar>::UnitZ()))
      .toRotationMatrix();
}

/// Inverse of euler_xyz_to_matrix; angles wrapped to (-pi, pi].
/// At the gimbal singularity (|cos ry| ~ 0) rz is fixed to 0.
template <typename Scalar>
Vec3<Scalar> matrix_to_euler_xyz(const Mat3<Scalar>& R) {
  Vec3<Scalar> e;
  const Scalar sy = std::clamp(R(0, 2), Scalar(-1), Scalar(1));
  e.y() = std::asin(sy);
  if (std::abs(std::cos(e.y())) > Scalar(1e-9)) {
    e.x() = std::atan2(-R(1, 2), R(2, 2));
    e.z() = std::atan2(-R(0, 1), R(0, 0));
  } else {
    e.x() = std::atan2(R(2, 1), R(1, 1));
    e.z() = Scalar(0);
  }
  e.x() = wrap_angle(e.x());
  e.y() = wrap_angle(e.y());
  e.z() = wrap_angle(e.z());
  return e;
}

/// Rigid transform taking local to world coordinates.
template <typename Scalar>
struct Pose {
  Mat3<Scalar> rotation = Mat3<Scalar>::Identity();
  Vec3<Scalar> translation = Vec3<Scalar>::Zero();

  static Pose identity() { return {}; }

  static Pose from_euler_xyz(const Vec3<Scalar>& euler, const Vec3<Scalar>& t) {
    return {euler_xyz_to_matrix(euler), t};
  }

  template <typename Derived>
  Vec3<Scalar> to_world(const Eigen::MatrixBase<Derived>& p_local) const {
    return rotation * p_local + translation;
  }

  template <typename Derived>
  Vec3<Scalar> to_local(const Eigen::MatrixBase<Derived>& p_world) const {
    return rotation.transpose() * (p_world - translation);
  }

  Pose inverse() const { return {rotation.transpose(), -(rotation.transpose() * translation)}; }

  // this applied after other: world = this(other(p))
  Pose compose(const Pose& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  /// Orthonormal with determinant +1, checked to tol.
  bool is_rigid(Scalar tol = Scalar(1e-9)) const {
    const Mat3<Scalar> RtR = rotation.transpose() * rotation;
    return (RtR - Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - Scalar(1)) <= tol;
  }
};

using Posed = Pose<double>;

/// The 11-parameter superquadric: two shape exponents, semi-extents (a, b, c),
/// and a rigid pose stored as intrinsic-XYZ Euler angles plus translation.
/// The implicit surface in the local frame is
///   ((|x/a|)^(2/e2) + (|y/b|)^(2/e2))^(e2/e1) + (|z/c|)^(2/e1) = 1.
template <typename Scalar>
struct Superquadric {
  Scalar eps1 = Scalar(1);
  Scalar eps2 = Scalar(1);
  Vec3<Scalar> size = Vec3<Scalar>::Ones();
  Vec3<Scalar> euler = Vec3<Scalar>::Zero();
  Vec3<Scalar> translation = Vec3<Scalar>::Zero();

  Pose<Scalar> pose() const { return Pose<Scalar>::from_euler_xyz(euler, translation); }

  void set_pose(const Pose<Scalar>& p) {
    euler = matrix_to_euler_xyz(p.rotation);
    translation = p.translation;
  }

  bool valid() const {
    return eps1 > Scalar(0) && eps2 > Scalar(0) && (size.array() > Scalar(0)).all() &&
           euler.allFinite() && translation.allFinite();
  }
};

using Superquadricd = Superquadric<double>;

/// Implicit function value at a point given in the local frame. < 1 inside,
/// 1 on the surface, > 1 outside; 0 at the centre. Coordinate ratios enter
/// through their absolute values so fractional exponents never see a
/// negative base.
template <typename Scalar, typename Derived>
Scalar eval_implicit(const Superquadric<Scalar>& sq, const Eigen::MatrixBase<Derived>& p_local) {
  using std::abs;
  using std::pow;
  const Scalar xr = abs(p_local.x() / sq.size.x());
  const Scalar yr = abs(p_local.y() / sq.size.y());
  const Scalar zr = abs(p_local.z() / sq.size.z());
  const Scalar q2 = Scalar(2) / sq.eps2;
  const Scalar xy = pow(xr, q2) + pow(yr, q2);
  return pow(xy, sq.eps2 / sq.eps1) + pow(zr, Scalar(2) / sq.eps1);
}

/// World point to the superquadric's local frame: R^T (p - T).
template <typename Scalar, typename Derived>
Vec3<Scalar> to_local(const Superquadric<Scalar>& sq, const Eigen::MatrixBase<Derived>& p_world) {
  return sq.pose().to_local(p_world);
}

/// Radial approximation of the signed Euclidean distance, clamped to
/// [-truncation, truncation]: ||p|| (1 - F^(-e1/2)) with F the implicit
/// value in the local frame. Exact for spheres; negative inside. The
/// relative error grows with eccentricity and |e - 1| but the sign and the
/// zero set are always exact.
template <typename Scalar>
Scalar radial_signed_distance(const Superquadric<Scalar>& sq, const Pose<Scalar>& pose,
                              const Vec3<Scalar>& p_world, Scalar truncation) {
  const Vec3<Scalar> q = pose.to_local(p_world);
  const Scalar r = q.norm();
  if (r < Scalar(1e-300)) {
    return std::clamp(-sq.size.minCoeff(), -truncation, truncation);
  }
  const Scalar f = eval_implicit(sq, q);
  const Scalar d = r * (Scalar(1) - std::pow(f, -sq.eps1 / Scalar(2)));
  // f -> 0 drives d to -inf, f -> inf drives the power to 0; both clamp.
  return std::clamp(d, -truncation, truncation);
}

template <typename Scalar>
Scalar radial_signed_distance(const Superquadric<Scalar>& sq, const Vec3<Scalar>& p_world,
                              Scalar truncation) {
  return radial_signed_distance(sq, sq.pose(), p_world, truncation);
}

namespace detail {

/// Signed power sgn(w) |w|^e.
template <typename Scalar>
Scalar spow(Scalar w, Scalar e) {
  const Scalar m = std::pow(std::abs(w), e);
  return w < Scalar(0) ? -m : m;
}

/// spow with the base floored away from zero, for the negative exponents
/// that appear in normals when an epsilon exceeds 2.
template <typename Scalar>
Scalar spow_guarded(Scalar w, Scalar e) {
  Scalar a = std::abs(w);
  if (e < Scalar(0) && a < Scalar(1e-12)) a = Scalar(1e-12);
  const Scalar m = std::pow(a, e);
  return w < Scalar(0) ? -m : m;
}

}  // namespace detail

template <typename Scalar>
struct SurfaceSample {
  Vec3<Scalar> position;
  Vec3<Scalar> normal;
};

/// Point and outward unit normal of the angular parameterization at
/// (eta, psi), eta in [-pi/2, pi/2], psi in [-pi, pi), in world coordinates.
template <typename Scalar>
SurfaceSample<Scalar> surface_point(const Superquadric<Scalar>& sq, const Pose<Scalar>& pose,
                                    Scalar eta, Scalar psi) {
  using detail::spow;
  using detail::spow_guarded;
  const Scalar ce = std::cos(eta), se = std::sin(eta);
  const Scalar cp = std::cos(psi), sp = std::sin(psi);

  const Scalar ce1 = spow(ce, sq.eps1);
  Vec3<Scalar> p(sq.size.x() * ce1 * spow(cp, sq.eps2), sq.size.y() * ce1 * spow(sp, sq.eps2),
                 sq.size.z() * spow(se, sq.eps1));

  Vec3<Scalar> n;
  if (std::abs(ce) < Scalar(1e-9)) {
    // poles: the cross product of the parameter derivatives degenerates but
    // the limit normal is the +-z axis
    n = Vec3<Scalar>(Scalar(0), Scalar(0), se < Scalar(0) ? Scalar(-1) : Scalar(1));
  } else {
    const Scalar cn = spow_guarded(ce, Scalar(2) - sq.eps1);
    n = Vec3<Scalar>(cn * spow_guarded(cp, Scalar(2) - sq.eps2) / sq.size.x(),
                     cn * spow_guarded(sp, Scalar(2) - sq.eps2) / sq.size.y(),
                     spow_guarded(se, Scalar(2) - sq.eps1) / sq.size.z());
    const Scalar len = n.norm();
    if (len > Scalar(0) && std::isfinite(len)) {
      n /= len;
    } else {
      n = p.cwiseQuotient(sq.size.cwiseProduct(sq.size)).normalized();
    }
  }
  return {pose.to_world(p), pose.rotation * n};
}

template <typename Scalar>
SurfaceSample<Scalar> surface_point(const Superquadric<Scalar>& sq, Scalar eta, Scalar psi) {
  return surface_point(sq, sq.pose(), eta, psi);
}

template <typename Scalar>
struct SurfaceSamples {
  PointsX3<Scalar> positions;
  PointsX3<Scalar> normals;
};

/// n surface points with outward unit normals, drawn from uniform (eta, psi)
/// parameters. Deterministic for a fixed seed.
template <typename Scalar>
SurfaceSamples<Scalar> sample_surface(const Superquadric<Scalar>& sq, int n, std::uint64_t seed) {
  SurfaceSamples<Scalar> out;
  out.positions.resize(n, 3);
  out.normals.resize(n, 3);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta_dist(-EIGEN_PI / 2, EIGEN_PI / 2);
  std::uniform_real_distribution<double> psi_dist(-EIGEN_PI, EIGEN_PI);
  const Pose<Scalar> pose = sq.pose();
  for (int i = 0; i < n; ++i) {
    const Scalar eta = Scalar(eta_dist(rng));
    const Scalar psi = Scalar(psi_dist(rng));
    const SurfaceSample<Scalar> s = surface_point(sq, pose, eta, psi);
    out.positions.row(i) = s.position.transpose();
    out.normals.row(i) = s.normal.transpose();
  }
  return out;
}

}  // namespace primforge
