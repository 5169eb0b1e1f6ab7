#pragma once

#include <cstddef>
#include <functional>

namespace porebench {

/// Worker cap: POREBENCH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) across up to thread_count() workers. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace porebench
