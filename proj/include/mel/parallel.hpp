#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mel {

unsigned default_workers();

/// Splits [0, total) into `workers` contiguous chunks and runs body(chunk, begin, end)
/// on each; chunk indices are stable so callers can merge per-chunk results in order.
/// The first exception thrown by any chunk is rethrown on the calling thread.
template <class Body>
void parallel_chunks(std::size_t total, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  const std::size_t chunks = std::min<std::size_t>(workers, std::max<std::size_t>(total, 1));
  if (chunks <= 1) {
    body(std::size_t{0}, std::size_t{0}, total);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> threads;
    threads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = total * c / chunks;
      const std::size_t end = total * (c + 1) / chunks;
      threads.emplace_back([&, c, begin, end] {
        try {
          body(c, begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mel
