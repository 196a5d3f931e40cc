#pragma once
#include <functional>

namespace cata {

// Worker count: CATACLYSM_THREADS if set (clamped to [1, 256]), else the
// hardware concurrency, else 1.
int worker_count();

// Runs fn(0) .. fn(n-1) across `workers` threads (<=0 means worker_count()).
// Jobs are claimed from an atomic counter, so completion order is arbitrary;
// results must be written to per-index slots and each job must depend only on
// its index for output to be independent of the worker count. Exceptions are
// captured and the first one is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn, int workers = 0);

}  // namespace cata
