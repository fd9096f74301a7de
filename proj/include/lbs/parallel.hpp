#pragma once

// Index-based parallel loop over independent tasks.  Results must be written
// to per-index slots; combined with per-index RNG substreams this keeps
// output identical for any thread count.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace lbs {

inline int resolve_threads(int requested, std::size_t tasks) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int n = requested > 0 ? requested : hw;
  return std::max(1, std::min<int>(n, static_cast<int>(tasks)));
}

inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
  const int nthreads = resolve_threads(threads, count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < count;
           i += static_cast<std::size_t>(nthreads)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace lbs
