#pragma once
#include <functional>

namespace wicknls {

// Number of workers used when a caller passes 0 (hardware concurrency).
int default_workers();

// Run fn(task, worker) for task = 0..count-1 on `workers` threads (resolved
// through default_workers when workers <= 0).  Tasks are claimed from a
// shared counter; workers get stable ids 0..workers-1 so callers can keep
// per-worker scratch (e.g. transform engines).  Callers must write results
// into task-indexed slots — merges then never depend on the schedule.
// The first exception thrown by any task is rethrown on the calling thread.
void parallel_for(int count, int workers, const std::function<void(int, int)>& fn);

}  // namespace wicknls
