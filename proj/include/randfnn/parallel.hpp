#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace randfnn {

/// Worker cap: RANDFNN_THREADS if set (>= 1), otherwise hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("RANDFNN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(0), ..., fn(count-1) on up to worker_count() threads. Work items
/// must be independent and write only to per-index slots, which keeps results
/// identical to a sequential loop. The first exception thrown by a work item
/// is rethrown after all threads join.
inline void parallel_for(std::int64_t count,
                         const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace randfnn
