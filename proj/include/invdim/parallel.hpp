#pragma once

#include <cstdint>
#include <functional>

namespace invdim {

/// Number of worker threads: min(hardware, INVDIM_THREADS); at least 1.
/// The environment variable is re-read on every call so tests can vary it.
int worker_count();

/// Runs fn(begin, end) over a static partition of [0, n). Chunks are disjoint,
/// so writes to per-index slots are race-free and results are independent of
/// the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace invdim
