// Copyright 2026 The qreset Authors
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

#ifndef QRESET_PARALLEL_HPP
#define QRESET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qreset {

/// Number of workers to use when the caller passes 0.
inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Contiguous index range [begin, end) of one batch when `n` items are split
/// into `batches` nearly equal parts. Depends only on (n, batches, b).
struct BatchRange {
  std::size_t begin;
  std::size_t end;
};

inline BatchRange batch_range(std::size_t n, std::size_t batches, std::size_t b) {
  return {n * b / batches, n * (b + 1) / batches};
}

/// Runs fn(b) for b = 0..count-1 on up to `threads` workers. Batches are
/// claimed dynamically, so fn must write only to per-batch storage; the
/// caller reduces in batch order for thread-count independent results.
/// The first exception thrown by any batch is rethrown here.
template <class Fn>
void for_each_batch(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t b = 0; b < count; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= count || failed.load()) return;
          try {
            fn(b);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
            return;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qreset

#endif  // QRESET_PARALLEL_HPP
