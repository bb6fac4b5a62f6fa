#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nadyn {

namespace detail {
inline std::atomic<unsigned>& worker_count() {
  static std::atomic<unsigned> workers{1};
  return workers;
}
}  // namespace detail

inline unsigned workers() { return detail::worker_count().load(); }
inline void set_workers(unsigned k) { detail::worker_count().store(std::max(1u, k)); }

/// Runs fn(i) for i in [0, n) over contiguous chunks. Callers write results by
/// index so the outcome never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t k = std::min<std::size_t>(workers(), n);
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(k);
  const std::size_t chunk = (n + k - 1) / k;
  for (std::size_t w = 0; w < k; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nadyn
