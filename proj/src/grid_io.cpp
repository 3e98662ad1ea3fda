// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "primforge/grid_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include "primforge/errors.hpp"

namespace primforge {

namespace {

// The build targets little-endian hosts; raw field writes keep the format
// byte-exact without swapping.
static_assert(sizeof(float) == 4 && sizeof(double) == 8);

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw TruncatedFile("unexpected end of TSDF stream");
  return value;
}

constexpr char kMagic[4] = {'T', 'S', 'D', 'F'};

}  // namespace

void write_grid(const VoxelGrid& grid, std::ostream& out) {
  out.write(kMagic, 4);
  put<std::uint16_t>(out, 1);
  put<std::uint16_t>(out, 0);
  put<std::uint32_t>(out, std::uint32_t(grid.dims.x()));
  put<std::uint32_t>(out, std::uint32_t(grid.dims.y()));
  put<std::uint32_t>(out, std::uint32_t(grid.dims.z()));
  for (int k = 0; k < 3; ++k) put<double>(out, grid.origin[k]);
  put<double>(out, grid.voxel_size);
  put<double>(out, grid.truncation);
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            std::streamsize(grid.values.size() * sizeof(float)));
  if (!out) throw IoError("failed to write TSDF stream");
}

void write_grid(const VoxelGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_grid(grid, out);
}

VoxelGrid read_grid(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw BadMagic("not a TSDF file");
  const auto version = get<std::uint16_t>(in);
  if (version != 1) throw VersionUnsupported("TSDF version " + std::to_string(version));
  get<std::uint16_t>(in);  // reserved

  VoxelGrid grid;
  grid.dims.x() = int(get<std::uint32_t>(in));
  grid.dims.y() = int(get<std::uint32_t>(in));
  grid.dims.z() = int(get<std::uint32_t>(in));
  for (int k = 0; k < 3; ++k) grid.origin[k] = get<double>(in);
  grid.voxel_size = get<double>(in);
  grid.truncation = get<double>(in);
  if (!grid.spec().valid()) throw TruncatedFile("TSDF header has invalid geometry");

  const std::int64_t count = grid.voxel_count();
  grid.values.resize(std::size_t(count));
  in.read(reinterpret_cast<char*>(grid.values.data()), std::streamsize(count * sizeof(float)));
  if (in.gcount() != std::streamsize(count * sizeof(float)))
    throw TruncatedFile("TSDF value payload is short");
  return grid;
}

VoxelGrid read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return read_grid(in);
}

}  // namespace primforge
