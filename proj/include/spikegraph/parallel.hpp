#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace spikegraph {

// Runs fn(0) .. fn(count - 1) on up to `threads` workers with a static
// round-robin split. Callers keep determinism by writing results into
// preallocated slots indexed by the task id. The first exception thrown by
// any task is rethrown on the calling thread after all workers join.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (threads < 1) threads = 1;
  int workers = std::min(threads, count);
  if (workers == 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int k = w; k < count; k += workers) fn(k);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace spikegraph
