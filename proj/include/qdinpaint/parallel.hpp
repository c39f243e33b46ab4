#pragma once

#include <cstddef>
#include <functional>

namespace qdi {

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace qdi
