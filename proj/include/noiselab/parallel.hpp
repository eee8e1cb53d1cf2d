#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace noiselab {

// Runs fn(i) for i in [0, n) across `workers` threads on contiguous index
// blocks. Callers are responsible for writing results into per-index slots;
// nothing here imposes an ordering, so reductions must be staged by index to
// stay deterministic. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (workers < 1) workers = 1;
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace noiselab
