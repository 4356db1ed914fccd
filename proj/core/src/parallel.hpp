#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace collab::detail {

// Splits [0, n) into `chunks` contiguous ranges and runs body(chunk, begin,
// end) for each, pulling chunks from a shared counter. Callers write results
// into per-chunk slots, so output order never depends on scheduling.
template <class Body>
void for_each_chunk(std::size_t n, std::size_t chunks, unsigned threads, Body&& body) {
  if (n == 0) return;
  chunks = std::clamp<std::size_t>(chunks, 1, n);
  auto bounds = [&](std::size_t c) { return c * n / chunks; };

  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        body(c, bounds(c), bounds(c + 1));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(chunks));
  pool.reserve(count - 1);
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace collab::detail
