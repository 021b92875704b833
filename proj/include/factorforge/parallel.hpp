#pragma once

#include <cstddef>
#include <functional>

namespace factorforge {

/// Worker count: hardware concurrency, capped by FACTORFORGE_THREADS when that
/// is set to a positive integer. Always >= 1.
std::size_t worker_thread_count();

/// Runs fn over contiguous chunks of [0, n). Callers must make fn(begin, end)
/// write only to slots in [begin, end) so results match the sequential loop
/// byte for byte at any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace factorforge
