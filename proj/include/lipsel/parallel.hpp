#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace lipsel {

// Worker count for batched pure computations: LIPSEL_THREADS when set to a
// positive integer (clamped to 64), otherwise the hardware count capped at
// 8. Results never depend on this value; it only bounds wall-clock
// parallelism.
inline int worker_count() {
  if (const char* env = std::getenv("LIPSEL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<int>(std::min(v, 64L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

// Evaluates fn(0), ..., fn(n-1) and returns the results in index order.
// fn must be safe to call from several threads at once. If calls throw,
// the exception from the lowest index is rethrown.
template <typename R, typename F>
std::vector<R> parallel_map(int n, F&& fn) {
  std::vector<R> out(static_cast<size_t>(n));
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[static_cast<size_t>(i)] = fn(i);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace lipsel
