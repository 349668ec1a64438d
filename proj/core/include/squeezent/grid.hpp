#ifndef SQUEEZENT_GRID_HPP
#define SQUEEZENT_GRID_HPP

#include <cstddef>
#include <functional>

namespace squeezent::grid {

/// Worker count: explicit request wins, then the SQUEEZENT_THREADS
/// environment variable, then hardware concurrency. 0 means auto.
std::size_t thread_count(std::size_t requested = 0);

/// Runs fn(0..n-1) across a worker pool. Each index is processed exactly
/// once; callers own output placement (write by index), so parallel
/// execution never affects assembled results.
void parallel_for(std::size_t n, std::size_t requested_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace squeezent::grid

#endif
