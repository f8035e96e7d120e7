#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace compactkit::detail {

// COMPACTKIT_THREADS caps the worker count; unset or invalid means hardware concurrency.
inline std::size_t thread_budget() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COMPACTKIT_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
    } catch (...) {
    }
  }
  return hw;
}

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write into per-index slots so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::size_t workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace compactkit::detail
