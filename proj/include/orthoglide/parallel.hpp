#pragma once

#include <cstddef>
#include <functional>

namespace orthoglide {

/// Runs fn(begin, end) over disjoint index chunks, possibly on several
/// threads. Callers write to per-index output slots, so results do not depend
/// on the schedule. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn);

/// hardware_concurrency clamped to [1, 64].
int default_threads();

}  // namespace orthoglide
