#pragma once

#include <cstddef>
#include <functional>

namespace repeval {

// Worker count: REPEVAL_THREADS if set (minimum 1), else hardware threads.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous ranges; callers
// must only write to disjoint per-index slots so results are identical for
// any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace repeval
