#pragma once

#include <cstddef>
#include <functional>

namespace blowup {

/// Worker count: hardware concurrency capped by BLOWUP_LAB_THREADS (>= 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, n). Indices are split into contiguous blocks, one
/// per worker, so any per-index output is independent of scheduling. The first
/// exception thrown by a worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace blowup
