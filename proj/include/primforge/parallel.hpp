// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace primforge {

/// Worker cap for all internal parallel loops. PRIMFORGE_THREADS overrides
/// the hardware count; values < 1 are ignored.
inline int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("PRIMFORGE_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return cached;
}

/// Runs fn(begin, end) over a partition of [0, n). Chunks are contiguous and
/// disjoint; callers must only write to per-index state so the result is
/// independent of the schedule.
template <typename Fn>
void parallel_for_ranges(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(max_threads(), n));
  if (workers <= 1) {
    fn(std::int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

/// Element-wise variant of parallel_for_ranges.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  parallel_for_ranges(n, [&fn](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace primforge
