#include "cgc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cgc {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("CGC_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int> g_threads{0};

// Set while a worker is executing blocks, so nested parallel loops fall back
// to serial execution instead of oversubscribing.
thread_local bool t_in_parallel = false;

}  // namespace

int thread_count() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n == 0) {
    n = initial_thread_count();
    g_threads.store(n, std::memory_order_relaxed);
  }
  return n;
}

void set_thread_count(int n) { g_threads.store(std::max(1, n), std::memory_order_relaxed); }

std::size_t block_count(std::size_t n, std::size_t block_size) {
  if (block_size == 0) block_size = 1;
  return (n + block_size - 1) / block_size;
}

void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t nblocks = block_count(n, block_size);

  auto run_range = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    const std::size_t end = std::min(n, begin + block_size);
    fn(b, begin, end);
  };

  const int workers = std::min<std::size_t>(thread_count(), nblocks);
  if (workers <= 1 || t_in_parallel) {
    for (std::size_t b = 0; b < nblocks; ++b) run_range(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_block = nblocks;
  std::exception_ptr err;

  auto worker = [&]() {
    t_in_parallel = true;
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) break;
      try {
        run_range(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (b < err_block) {
          err_block = b;
          err = std::current_exception();
        }
      }
    }
    t_in_parallel = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (err) std::rethrow_exception(err);
}

}  // namespace cgc
