#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace holo {

/// Fixed-size worker pool executing index-range loops.
///
/// `parallel_for` blocks until every index has been processed, which gives the
/// superstep barrier the iterative phases rely on. Work is handed out in
/// chunks; callers write results into per-index slots so that the output never
/// depends on scheduling. The first exception thrown by a body is rethrown on
/// the calling thread after the loop drains.
class Executor {
 public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end)>;

  explicit Executor(std::size_t parallelism = 1);
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  std::size_t parallelism() const noexcept { return parallelism_; }

  void parallel_for(std::size_t n, const RangeFn& body);

  /// Convenience: calls `fn(i)` for each i in [0, n).
  template <class Fn>
  void for_each_index(std::size_t n, Fn&& fn) {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }

  /// Evaluates `fn(i)` for each i and returns the results in index order.
  template <class Fn>
  auto map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    std::vector<decltype(fn(std::size_t{}))> out(n);
    for_each_index(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
  }

 private:
  void worker_loop();
  void run_chunks();

  std::size_t parallelism_;
  std::vector<std::thread> workers_;

  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::size_t generation_ = 0;
  std::size_t busy_ = 0;
  bool stopping_ = false;

  // State of the loop currently in flight; guarded by mutex_ except next_chunk_.
  const RangeFn* body_ = nullptr;
  std::size_t total_ = 0;
  std::size_t chunk_ = 1;
  std::size_t next_chunk_ = 0;
  std::exception_ptr error_;
};

}  // namespace holo
