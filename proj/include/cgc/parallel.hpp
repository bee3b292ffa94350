#pragma once

#include <cstddef>
#include <functional>

namespace cgc {

// Number of worker threads used by data-parallel loops. Initialized from the
// CGC_THREADS environment variable when set, otherwise from the hardware
// concurrency. Numerical results never depend on this value: work is split
// into fixed-size blocks and per-block results are combined in block order.
int thread_count();
void set_thread_count(int n);

// Runs fn(block_index, begin, end) for consecutive blocks covering [0, n),
// each of at most block_size items. Blocks are claimed dynamically by worker
// threads; fn must only write state owned by its own block. Exceptions are
// collected and the one from the lowest block index is rethrown. Nested
// calls (from inside a worker) run serially on the calling thread.
void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Number of blocks parallel_blocks uses for the given arguments.
std::size_t block_count(std::size_t n, std::size_t block_size);

}  // namespace cgc
