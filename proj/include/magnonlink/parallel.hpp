#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "magnonlink/errors.hpp"

namespace magnonlink {

/// 0 means one worker per hardware thread.
inline unsigned resolve_thread_count(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Worker bound from MAGNONLINK_THREADS (unset or 0 = auto).
inline unsigned thread_count_from_env() {
  const char* raw = std::getenv("MAGNONLINK_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 0) {
    throw ValidationError(std::string("MAGNONLINK_THREADS must be a non-negative integer, got '") +
                          raw + "'");
  }
  return static_cast<unsigned>(value);
}

/// Calls fn(i) for i in [0, n) over up to `threads` workers. Each index is
/// visited exactly once; the first exception thrown by any worker is
/// rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(resolve_thread_count(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace magnonlink
