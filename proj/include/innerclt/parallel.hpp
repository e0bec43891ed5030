#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace innerclt {

// Worker count: INNER_CLT_THREADS caps it, 0 or unset means auto.
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("INNER_CLT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return hw;
}

// Static contiguous partition of [0, n). Workers communicate only through
// disjoint index ranges, so results cannot depend on the worker count.
// Reductions over the filled arrays are done serially by the caller.
template <typename Fn>
void parallel_for(long n, Fn&& fn) {
  if (n <= 0) return;
  const int workers = std::min<long>(worker_count(), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run_range = [&](long lo, long hi) {
    try {
      for (long i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(run_range, lo, hi);
  }
  run_range(0, std::min(n, chunk));
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace innerclt
