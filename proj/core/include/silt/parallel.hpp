#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace silt {

/// Worker count: `requested` if positive, else SILT_WORKERS, else the
/// hardware concurrency.
inline int resolve_workers(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SILT_WORKERS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Fork-join loop over [0, count). `body(i)` must only write to slot i of
/// its outputs; any reduction happens afterwards in index order, so results
/// do not depend on the worker count.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t pool =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(pool - 1);
  for (std::size_t w = 1; w < pool; ++w) threads.emplace_back(run);
  run();
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Evaluates `fn(i)` for every i and returns the results in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, int workers, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, workers, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace silt
