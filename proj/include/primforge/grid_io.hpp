// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "primforge/voxel_grid.hpp"

namespace primforge {

/// TSDF file format (binary, little-endian):
///   magic "TSDF" (4 bytes), u16 version = 1, u16 reserved = 0,
///   u32 nx, u32 ny, u32 nz, f64 origin[3], f64 voxel_size, f64 truncation,
///   then nx*ny*nz f32 values, x-fastest.
void write_grid(const VoxelGrid& grid, std::ostream& out);
void write_grid(const VoxelGrid& grid, const std::string& path);

VoxelGrid read_grid(std::istream& in);
VoxelGrid read_grid(const std::string& path);

}  // namespace primforge
