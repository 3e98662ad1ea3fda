// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/superquadric.hpp"

#include <doctest.h>

#include <random>

#include "test_support.hpp"

using namespace primforge;
using namespace primforge::testing;

TEST_CASE("implicit value at canonical points") {
  Superquadricd sq;
  sq.eps1 = 0.7;
  sq.eps2 = 2.3;
  sq.size = Eigen::Vector3d(0.4, 0.9, 1.7);

  CHECK(eval_implicit(sq, Eigen::Vector3d(sq.size.x(), 0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_implicit(sq, Eigen::Vector3d(0, 0, 0)) == 0.0);

  Superquadricd unit;  // eps = 1, size = 1: reduces to x^2 + y^2 + z^2
  CHECK(eval_implicit(unit, Eigen::Vector3d(0.5, 0.5, 0.5)) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("to_local round trips and hand-computed rotation") {
  Superquadricd sq;
  CHECK(to_local(sq, Eigen::Vector3d(1, 2, 3)).isApprox(Eigen::Vector3d(1, 2, 3), 1e-15));

  sq.translation = Eigen::Vector3d(1, 0, 0);
  CHECK(to_local(sq, Eigen::Vector3d(1, 0, 0)).norm() == doctest::Approx(0.0).epsilon(1e-15));

  Superquadricd rot;
  rot.euler = Eigen::Vector3d(0, 0, EIGEN_PI / 2);
  CHECK((to_local(rot, Eigen::Vector3d(0, 1, 0)) - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-12);

  // forward/backward composition is the identity
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Superquadricd s = random_superquadric(rng);
    const Posed pose = s.pose();
    const Eigen::Vector3d p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    CHECK((pose.to_world(pose.to_local(p)) - p).norm() <= 1e-12);
  }
}

TEST_CASE("euler conversion round trips and stays wrapped") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Vec3d e(uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4));
    const Mat3d R = euler_xyz_to_matrix(e);
    const Vec3d back = matrix_to_euler_xyz(R);
    for (int k = 0; k < 3; ++k) {
      CHECK(back[k] > -EIGEN_PI);
      CHECK(back[k] <= EIGEN_PI);
    }
    CHECK((euler_xyz_to_matrix(back) - R).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(Posed{R, Vec3d::Zero()}.is_rigid(1e-9));
  }
}

TEST_CASE("radial signed distance") {
  Superquadricd sphere;  // unit sphere

  SUBCASE("zero on the surface") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const Superquadricd sq = random_superquadric(rng);
      const auto s = surface_point(sq, uniform(rng, -1.5, 1.5), uniform(rng, -3.1, 3.1));
      CHECK(std::abs(radial_signed_distance(sq, Vec3d(s.position), 10.0)) <= 1e-9);
    }
  }
  SUBCASE("exact for spheres") {
    CHECK(radial_signed_distance(sphere, Vec3d(2, 0, 0), 10.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("clamped to the truncation") {
    CHECK(radial_signed_distance(sphere, Vec3d(3, 0, 0), 0.5) == 0.5);
    CHECK(radial_signed_distance(sphere, Vec3d(0, 0, 0), 0.5) == -0.5);
  }
  SUBCASE("centre returns the smallest extent") {
    Superquadricd sq;
    sq.size = Eigen::Vector3d(0.4, 0.2, 0.9);
    CHECK(radial_signed_distance(sq, Vec3d(0, 0, 0), 10.0) == doctest::Approx(-0.2));
  }
}

TEST_CASE("inside/outside sign matches the implicit value") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 1000) {
    const Superquadricd sq = random_superquadric(rng);
    const Eigen::Vector3d p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double f = eval_implicit(sq, to_local(sq, p));
    if (std::abs(f - 1.0) <= 1e-9) continue;
    const double d = radial_signed_distance(sq, Vec3d(p), 100.0);
    CHECK(((f > 1.0) == (d > 0.0)));
    ++checked;
  }
}

TEST_CASE("rigid equivariance of the implicit value") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const Superquadricd sq = random_superquadric(rng);
    const Posed extra = Posed::from_euler_xyz(
        Vec3d(uniform(rng, -3, 3), uniform(rng, -1.5, 1.5), uniform(rng, -3, 3)),
        Vec3d(uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)));
    Superquadricd moved = sq;
    moved.set_pose(extra.compose(sq.pose()));

    const Eigen::Vector3d p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double f0 = eval_implicit(sq, to_local(sq, p));
    const double f1 = eval_implicit(moved, to_local(moved, Eigen::Vector3d(extra.to_world(p))));
    CHECK(f1 == doctest::Approx(f0).epsilon(1e-9));
  }
}

TEST_CASE("implicit value increases strictly along rays from the centre") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const Superquadricd sq = random_superquadric(rng);
    Eigen::Vector3d dir(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    if (dir.norm() < 1e-6) continue;
    dir.normalize();
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double s = 0.05 * k;
      const double f = eval_implicit(sq, Eigen::Vector3d(s * dir));
      CHECK(f > prev);
      prev = f;
    }
  }
}

TEST_CASE("surface sampling") {
  std::mt19937_64 rng(31);

  SUBCASE("points lie on the surface with unit normals") {
    for (int i = 0; i < 10; ++i) {
      const Superquadricd sq = random_superquadric(rng);
      const auto samples = sample_surface(sq, 200, 42 + std::uint64_t(i));
      for (int k = 0; k < samples.positions.rows(); ++k) {
        const Eigen::Vector3d p = samples.positions.row(k).transpose();
        const double f = eval_implicit(sq, to_local(sq, p));
        CHECK(std::abs(f - 1.0) <= 1e-6);
        CHECK(std::abs(samples.normals.row(k).norm() - 1.0) <= 1e-9);
      }
    }
  }

  SUBCASE("sphere normals point radially") {
    Superquadricd sphere;
    const auto samples = sample_surface(sphere, 500, 7);
    for (int k = 0; k < samples.positions.rows(); ++k) {
      const Eigen::Vector3d p = samples.positions.row(k).transpose();
      CHECK((samples.normals.row(k).transpose() - p.normalized()).norm() <= 1e-9);
    }
  }

  SUBCASE("fixed seed reproduces the set") {
    const Superquadricd sq = random_superquadric(rng);
    const auto a = sample_surface(sq, 1000, 7);
    const auto b = sample_surface(sq, 1000, 7);
    CHECK((a.positions - b.positions).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.normals - b.normals).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("axis swap with a quarter turn yields the same surface") {
  // size (a, b) swapped + 90 deg about local z is the same point set; the
  // parameter shift psi -> psi - pi/2 makes the match pointwise for eps2 = 1
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    Superquadricd sq = random_superquadric(rng);
    sq.eps2 = 1.0;

    Superquadricd swapped = sq;
    std::swap(swapped.size.x(), swapped.size.y());
    const Posed quarter =
        Posed::from_euler_xyz(Vec3d(0, 0, EIGEN_PI / 2), Vec3d::Zero());
    swapped.set_pose(sq.pose().compose(quarter));

    double hausdorff = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double eta = uniform(rng, -EIGEN_PI / 2, EIGEN_PI / 2);
      const double psi = uniform(rng, -EIGEN_PI, EIGEN_PI);
      const auto a = surface_point(sq, eta, psi);
      const auto b = surface_point(swapped, eta, psi - EIGEN_PI / 2);
      hausdorff = std::max(hausdorff, (a.position - b.position).norm());
    }
    CHECK(hausdorff <= 1e-6);
  }
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(EIGEN_PI) == doctest::Approx(EIGEN_PI));
  CHECK(wrap_angle(-EIGEN_PI) == doctest::Approx(EIGEN_PI));
  CHECK(wrap_angle(3 * EIGEN_PI) == doctest::Approx(EIGEN_PI));
  CHECK(wrap_angle(2 * EIGEN_PI) == doctest::Approx(0.0));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * EIGEN_PI));
}
