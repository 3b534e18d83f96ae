#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace relcomp {

// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `workers`
// threads. Callers write per-index results into preallocated slots, so the
// outcome is identical for any worker count.
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (workers == 0) workers = 1;
  workers = std::min(workers, n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace relcomp
