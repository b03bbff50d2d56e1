#pragma once

#include <cstddef>
#include <functional>

namespace morse {

// Worker count from MORSE_CAUSAL_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries depend
// only on n and the worker count, so per-index results are deterministic.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace morse
