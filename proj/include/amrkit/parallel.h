#ifndef AMRKIT_PARALLEL_H_
#define AMRKIT_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace amrkit {

// Calls fn(i) for i in [0, n) on up to `jobs` threads. Callers write
// results into slot i, so output order never depends on scheduling. The
// first exception (by index) is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t n, unsigned jobs, Fn fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  unsigned count = std::min<std::size_t>(jobs, n);
  for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
  for (std::thread &t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace amrkit

#endif  // AMRKIT_PARALLEL_H_
