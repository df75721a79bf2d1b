#ifndef RBQR_PARALLEL_HPP
#define RBQR_PARALLEL_HPP

#include <barrier>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "rbqr/types.hpp"

namespace rbqr {

/// Half-open column range [begin, end).
struct ColumnRange {
  Index begin = 0;
  Index end = 0;
  Index size() const { return end - begin; }
};

/// Splits [0, n) into `parts` contiguous ranges whose sizes differ by at most one.
std::vector<ColumnRange> make_partition(Index n, int parts);

/// Throws InputError unless `ranges` cover [0, n) exactly once.
void check_partition(std::span<const ColumnRange> ranges, Index n);

/// Runs fn(r, ranges[r]) for every range, one thread per range; range 0 runs
/// on the calling thread. The first exception thrown by any range is rethrown.
void parallel_for_ranges(std::span<const ColumnRange> ranges,
                         const std::function<void(int, ColumnRange)>& fn);

/// Persistent team of worker threads driven in lock-step.
///
/// run(task) executes task(w) for w = 0..size()-1 concurrently and returns
/// once every worker has finished; worker 0 is the calling thread. Between
/// two run() calls the helper threads sleep on a barrier, so repeated
/// dispatch does not pay for thread creation.
class WorkerTeam {
 public:
  explicit WorkerTeam(int workers);
  ~WorkerTeam();

  WorkerTeam(const WorkerTeam&) = delete;
  WorkerTeam& operator=(const WorkerTeam&) = delete;

  int size() const { return size_; }
  void run(const std::function<void(int)>& task);

 private:
  void loop(int w);

  int size_;
  std::barrier<> start_;
  std::barrier<> done_;
  const std::function<void(int)>* task_ = nullptr;
  bool stop_ = false;
  std::vector<std::exception_ptr> errors_;
  std::vector<std::jthread> threads_;
};

}  // namespace rbqr

#endif  // RBQR_PARALLEL_HPP
