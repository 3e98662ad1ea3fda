// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "primforge/primitives.hpp"

namespace primforge {

/// Binary .pqp layout (little-endian):
///   magic "PQPF", u16 version = 1, u16 reserved (bit 0: normalization
///   present), u32 count, then f64 center[3] + f64 scale when the
///   normalization flag is set, then count records of 96 bytes each:
///   u8 z_class, u8 xy_class, 6 pad bytes, and 11 f64
///   (eps1, eps2, a, b, c, rx, ry, rz, tx, ty, tz).
std::vector<std::uint8_t> encode_model(const PrimitiveModel& model);
PrimitiveModel decode_model(const std::vector<std::uint8_t>& bytes);

/// Human-readable .pqp.json with the same content; doubles survive the
/// round trip exactly (shortest-round-trip printing).
std::string encode_model_json(const PrimitiveModel& model);
PrimitiveModel decode_model_json(const std::string& text);

/// Path-level helpers: *.json paths use the JSON codec, anything else the
/// binary one; load sniffs the leading bytes so either content works under
/// either name.
void save_model(const PrimitiveModel& model, const std::string& path);
PrimitiveModel load_model(const std::string& path);

}  // namespace primforge
