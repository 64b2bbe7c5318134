#pragma once

#include <cstddef>
#include <functional>

namespace modspace {

/// Cap on worker threads used by parallel loops. 0 restores the default
/// (hardware concurrency).
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, n), splitting the range into contiguous blocks
/// across workers. Each index is handled by exactly one worker, so results
/// written per index do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace modspace
