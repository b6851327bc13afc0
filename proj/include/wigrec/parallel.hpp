#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace wigrec {

/// Run fn(0..n-1) on a bounded worker pool. Tasks must write to disjoint
/// state; results are then independent of scheduling. workers <= 1 runs
/// inline.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t idx = 0; idx < n; ++idx) fn(idx);
    return;
  }
  const auto pool = static_cast<std::size_t>(workers);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) {
    threads.emplace_back([&] {
      for (std::size_t idx = next.fetch_add(1); idx < n; idx = next.fetch_add(1)) {
        fn(idx);
      }
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace wigrec
