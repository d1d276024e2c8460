#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fsi {

/// Runs `fn(worker, begin, end)` on `n_workers` contiguous chunks of [0, n).
/// Worker 0 runs on the calling thread. The first exception thrown by any
/// worker is rethrown after all workers joined.
template <class Fn>
void parallel_chunks(int n_workers, std::size_t n, Fn&& fn) {
  n_workers = std::max(1, std::min<int>(n_workers, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (n_workers == 1) {
    fn(0, std::size_t{0}, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](int w, std::size_t b, std::size_t e) {
    try {
      fn(w, b, e);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_workers - 1);
  const std::size_t chunk = (n + n_workers - 1) / n_workers;
  for (int w = 1; w < n_workers; ++w) {
    const std::size_t b = std::min(n, w * chunk);
    const std::size_t e = std::min(n, b + chunk);
    threads.emplace_back(guarded, w, b, e);
  }
  guarded(0, 0, std::min(n, chunk));
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Runs `fn(worker)` once on each of `n_workers` threads.
template <class Fn>
void parallel_workers(int n_workers, Fn&& fn) {
  parallel_chunks(n_workers, static_cast<std::size_t>(std::max(1, n_workers)),
                  [&](int w, std::size_t, std::size_t) { fn(w); });
}

}  // namespace fsi
