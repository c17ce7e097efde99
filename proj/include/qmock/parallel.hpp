#ifndef QMOCK_PARALLEL_HPP
#define QMOCK_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qmock::parallel {

inline std::atomic<unsigned>& thread_count_storage() {
  static std::atomic<unsigned> count{1};
  return count;
}

inline unsigned thread_count() { return thread_count_storage().load(); }

inline void set_thread_count(unsigned n) { thread_count_storage().store(std::max(1u, n)); }

/// Runs body(lo, hi) over disjoint chunks of [begin, end). Each index is owned
/// by exactly one chunk, so results never depend on the thread count.
template <class Body>
void for_chunks(std::size_t begin, std::size_t end, std::size_t min_chunk, Body&& body) {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    std::size_t lo = begin + w * step;
    std::size_t hi = std::min(end, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  body(begin, std::min(end, begin + step));
  for (auto& t : pool) t.join();
}

}  // namespace qmock::parallel

#endif  // QMOCK_PARALLEL_HPP
