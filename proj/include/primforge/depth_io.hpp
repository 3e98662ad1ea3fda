// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "primforge/tsdf.hpp"

namespace primforge {

/// Grayscale float32 PFM ("Pf"), little-endian (negative scale), rows stored
/// bottom-to-top as the format prescribes.
void write_pfm(const std::vector<float>& data, int width, int height, const std::string& path);
std::vector<float> read_pfm(const std::string& path, int& width, int& height);

/// A view pair on disk is view_####.pfm plus view_####.json holding
/// {width, height, fx, fy, cx, cy, camera_to_world: [16 row-major]}.
void write_view(const DepthView& view, const std::string& dir, int index);

/// Loads every view pair in the directory, sorted by filename. Throws
/// IoError when the directory holds no pairs or the pfm/json counts differ.
std::vector<DepthView> load_depth_directory(const std::string& dir);

}  // namespace primforge
