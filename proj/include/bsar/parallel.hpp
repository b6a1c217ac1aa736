#pragma once

#include <cstddef>
#include <functional>

namespace bsar {

/// 0 maps to the hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Calls fn(i) for i in [0, n) on up to `threads` workers, each worker
/// taking a contiguous chunk. fn must only write state owned by index i.
/// The first exception thrown by a worker is rethrown after the join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace bsar
