#pragma once

#include <cstddef>
#include <functional>

namespace fraccomp {

/// Worker count: FRACCOMP_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs fn on contiguous chunks [begin, end) of [0, n). Chunks are fixed by n and
/// the worker count, so results written per index are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fraccomp
