#include "holo/parallel.hpp"

#include <algorithm>

namespace holo {

Executor::Executor(std::size_t parallelism) : parallelism_(std::max<std::size_t>(1, parallelism)) {
  workers_.reserve(parallelism_ - 1);
  for (std::size_t i = 1; i < parallelism_; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Executor::~Executor() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

void Executor::parallel_for(std::size_t n, const RangeFn& body) {
  if (n == 0) return;
  if (parallelism_ == 1 || n == 1) {
    body(0, n);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    body_ = &body;
    total_ = n;
    // A few chunks per thread keeps skewed groups from serializing the loop.
    chunk_ = std::max<std::size_t>(1, n / (parallelism_ * 8));
    next_chunk_ = 0;
    error_ = nullptr;
    busy_ = workers_.size();
    ++generation_;
  }
  wake_.notify_all();
  run_chunks();

  std::unique_lock lock(mutex_);
  done_.wait(lock, [this] { return busy_ == 0; });
  body_ = nullptr;
  if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
}

void Executor::run_chunks() {
  for (;;) {
    std::size_t begin;
    std::size_t end;
    const RangeFn* body;
    {
      std::lock_guard lock(mutex_);
      begin = next_chunk_ * chunk_;
      if (begin >= total_ || error_) return;
      ++next_chunk_;
      end = std::min(total_, begin + chunk_);
      body = body_;
    }
    try {
      (*body)(begin, end);
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
}

void Executor::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
    }
    run_chunks();
    {
      std::lock_guard lock(mutex_);
      --busy_;
    }
    done_.notify_one();
  }
}

}  // namespace holo
