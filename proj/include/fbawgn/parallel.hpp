#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fbawgn {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(begin, end, block_index) over [0, n_items) in fixed-size blocks.
// Block boundaries are independent of the worker count, so per-block partial
// results can be reduced in block order for bit-identical totals.
inline void parallel_blocks(std::size_t n_items, std::size_t block_size,
                            unsigned workers,
                            const std::function<void(std::size_t, std::size_t,
                                                     std::size_t)>& fn) {
  if (n_items == 0) return;
  const std::size_t n_blocks = (n_items + block_size - 1) / block_size;
  workers = resolve_workers(workers);
  if (workers > n_blocks) workers = static_cast<unsigned>(n_blocks);

  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t lo = b * block_size;
      const std::size_t hi = std::min(n_items, lo + block_size);
      fn(lo, hi, b);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      const std::size_t lo = b * block_size;
      const std::size_t hi = std::min(n_items, lo + block_size);
      try {
        fn(lo, hi, b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

constexpr std::size_t kMcBlockSize = 8192;

}  // namespace fbawgn
