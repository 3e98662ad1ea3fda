// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace primforge {

/// Geometry of a dense voxel grid: counts, world position of the first voxel
/// centre, edge length, and the truncation bound for stored distances.
struct GridSpec {
  Eigen::Vector3i dims = Eigen::Vector3i(100, 100, 100);
  Eigen::Vector3d origin = Eigen::Vector3d(-0.99, -0.99, -0.99);
  double voxel_size = 0.02;
  double truncation = 0.024;

  /// resolution^3 voxels whose centres uniformly sample [-1, 1]^3, with
  /// truncation = truncation_factor * voxel_size.
  static GridSpec unit_domain(int resolution, double truncation_factor = 1.2) {
    GridSpec s;
    s.dims.setConstant(resolution);
    s.voxel_size = 2.0 / resolution;
    s.origin.setConstant(-1.0 + 0.5 * s.voxel_size);
    s.truncation = truncation_factor * s.voxel_size;
    return s;
  }

  std::int64_t voxel_count() const {
    return std::int64_t(dims.x()) * dims.y() * dims.z();
  }

  // x-fastest layout: index = x + nx (y + ny z)
  std::int64_t index(int ix, int iy, int iz) const {
    return ix + std::int64_t(dims.x()) * (iy + std::int64_t(dims.y()) * iz);
  }

  Eigen::Vector3i coords(std::int64_t index) const {
    const int ix = int(index % dims.x());
    index /= dims.x();
    const int iy = int(index % dims.y());
    const int iz = int(index / dims.y());
    return {ix, iy, iz};
  }

  Eigen::Vector3d center(int ix, int iy, int iz) const {
    return origin + voxel_size * Eigen::Vector3d(ix, iy, iz);
  }

  Eigen::Vector3d center(std::int64_t index) const {
    const Eigen::Vector3i c = coords(index);
    return center(c.x(), c.y(), c.z());
  }

  bool contains(int ix, int iy, int iz) const {
    return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims.x() && iy < dims.y() && iz < dims.z();
  }

  bool valid() const {
    return (dims.array() > 0).all() && voxel_size > 0.0 && truncation > 0.0;
  }
};

/// Dense truncated signed distance field. Values are stored as f32, clamped
/// to [-truncation, truncation], x-fastest.
struct VoxelGrid {
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double voxel_size = 0.0;
  double truncation = 0.0;
  std::vector<float> values;

  VoxelGrid() = default;

  /// Grid initialised to +truncation (free space) everywhere.
  explicit VoxelGrid(const GridSpec& s)
      : dims(s.dims),
        origin(s.origin),
        voxel_size(s.voxel_size),
        truncation(s.truncation),
        values(std::size_t(s.voxel_count()), float(s.truncation)) {}

  GridSpec spec() const { return {dims, origin, voxel_size, truncation}; }

  std::int64_t voxel_count() const { return spec().voxel_count(); }
  std::int64_t index(int ix, int iy, int iz) const { return spec().index(ix, iy, iz); }
  Eigen::Vector3i coords(std::int64_t i) const { return spec().coords(i); }
  Eigen::Vector3d center(int ix, int iy, int iz) const { return spec().center(ix, iy, iz); }
  Eigen::Vector3d center(std::int64_t i) const { return spec().center(i); }

  float at(int ix, int iy, int iz) const { return values[std::size_t(index(ix, iy, iz))]; }
  float& at(int ix, int iy, int iz) { return values[std::size_t(index(ix, iy, iz))]; }
  float operator[](std::int64_t i) const { return values[std::size_t(i)]; }
  float& operator[](std::int64_t i) { return values[std::size_t(i)]; }
};

}  // namespace primforge
