#include "rbqr/parallel.hpp"

#include <algorithm>

namespace rbqr {

std::vector<ColumnRange> make_partition(Index n, int parts) {
  if (parts < 1) throw InputError("partition needs at least one part");
  std::vector<ColumnRange> out(static_cast<std::size_t>(parts));
  const Index base = n / parts;
  const Index extra = n % parts;
  Index at = 0;
  for (int p = 0; p < parts; ++p) {
    const Index len = base + (p < extra ? 1 : 0);
    out[static_cast<std::size_t>(p)] = {at, at + len};
    at += len;
  }
  return out;
}

void check_partition(std::span<const ColumnRange> ranges, Index n) {
  std::vector<ColumnRange> sorted(ranges.begin(), ranges.end());
  std::sort(sorted.begin(), sorted.end(), [](const ColumnRange& a, const ColumnRange& b) { return a.begin < b.begin; });
  Index at = 0;
  for (const auto& r : sorted) {
    if (r.begin > r.end) throw InputError("partition range has begin > end");
    if (r.size() == 0) continue;
    if (r.begin != at) throw InputError("partition does not cover the columns disjointly");
    at = r.end;
  }
  if (at != n) throw InputError("partition does not cover all columns");
}

void parallel_for_ranges(std::span<const ColumnRange> ranges,
                         const std::function<void(int, ColumnRange)>& fn) {
  if (ranges.empty()) return;
  std::vector<std::exception_ptr> errors(ranges.size());
  {
    std::vector<std::jthread> threads;
    threads.reserve(ranges.size() - 1);
    for (std::size_t r = 1; r < ranges.size(); ++r) {
      threads.emplace_back([&, r] {
        try {
          fn(static_cast<int>(r), ranges[r]);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      });
    }
    try {
      fn(0, ranges[0]);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

WorkerTeam::WorkerTeam(int workers)
    : size_(workers), start_(std::max(workers, 1)), done_(std::max(workers, 1)), errors_(static_cast<std::size_t>(std::max(workers, 1))) {
  if (workers < 1) throw InputError("worker count must be at least 1");
  threads_.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
}

WorkerTeam::~WorkerTeam() {
  if (size_ > 1) {
    stop_ = true;
    start_.arrive_and_wait();
  }
  // jthreads join on destruction
}

void WorkerTeam::loop(int w) {
  for (;;) {
    start_.arrive_and_wait();
    if (stop_) return;
    try {
      (*task_)(w);
    } catch (...) {
      errors_[static_cast<std::size_t>(w)] = std::current_exception();
    }
    done_.arrive_and_wait();
  }
}

void WorkerTeam::run(const std::function<void(int)>& task) {
  if (size_ == 1) {
    task(0);
    return;
  }
  task_ = &task;
  start_.arrive_and_wait();
  try {
    task(0);
  } catch (...) {
    errors_[0] = std::current_exception();
  }
  done_.arrive_and_wait();
  task_ = nullptr;
  for (auto& e : errors_) {
    if (e) {
      auto err = e;
      std::fill(errors_.begin(), errors_.end(), nullptr);
      std::rethrow_exception(err);
    }
  }
}

}  // namespace rbqr
