#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace christoffel {

/// Worker count: CHRISTOFFEL_THREADS if set (>= 1), else the hardware count.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("CHRISTOFFEL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on contiguous chunks. The first exception
/// thrown by any worker is rethrown after all workers join. Results must be
/// written to per-index slots so output does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_budget(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex guard;
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!error) error = std::current_exception();
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace christoffel
