#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace warplab::numerics {

/// Runs body(i) for i in [0, n) across up to `degree` threads. Results must
/// be written to caller-owned slots indexed by i, so the merged output is
/// identical for every degree. Exceptions are rethrown on the caller thread.
template <class Body>
void parallel_for(std::size_t n, int degree, Body&& body) {
  if (degree <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(degree), n);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) break;
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace warplab::numerics
