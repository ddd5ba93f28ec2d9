// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace imgeval {

// Runs fn(task) for task in [0, num_tasks) on up to `workers` threads. Tasks
// are handed out in index order; callers keep results per task so output
// never depends on scheduling. The first exception thrown (lowest task index)
// is rethrown after all threads join.
template <typename Fn>
void ParallelFor(std::size_t num_tasks, int workers, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(num_tasks, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < num_tasks; ++t) fn(t);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::size_t failed_task = num_tasks;
  std::exception_ptr failure;
  auto body = [&] {
    while (true) {
      std::size_t task;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= num_tasks) return;
        task = next++;
      }
      try {
        fn(task);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (task < failed_task) {
          failed_task = task;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace imgeval
