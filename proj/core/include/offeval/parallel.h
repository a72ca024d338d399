// Copyright 2026 The offeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef OFFEVAL_PARALLEL_H_
#define OFFEVAL_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace offeval {

// Runs fn(task) for every task in [0, num_tasks) on up to 'threads' workers.
// Tasks are claimed dynamically; callers write results into per-task slots
// and reduce them in task order, so results do not depend on 'threads'.
// The first exception thrown by a task is rethrown on the calling thread.
template <typename Fn>
void ParallelFor(std::size_t num_tasks, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), num_tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < num_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < num_tasks; t = next++) {
          try {
            fn(t);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next = num_tasks;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace offeval

#endif  // OFFEVAL_PARALLEL_H_
