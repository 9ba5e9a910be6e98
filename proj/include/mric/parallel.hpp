#pragma once

#include <cstddef>
#include <functional>

namespace mric {

// Runs fn(i) for every i in [begin, end) on a persistent worker pool.
// The range is split into contiguous chunks, one per worker; items must
// write disjoint outputs. Results are independent of the worker count,
// so seeded runs stay deterministic under MRIC_THREADS overrides.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

// Worker count of the pool (>= 1). Honors the MRIC_THREADS environment
// variable, otherwise hardware concurrency.
int thread_count();

} // namespace mric
