#pragma once

// Deterministic task parallelism: indices are split by static interleave, so
// which thread runs an index never affects results as long as tasks write to
// disjoint slots.

#include <cstddef>
#include <functional>

namespace dgff {

// requested <= 0 selects the hardware concurrency (at least 1).
int resolve_threads(int requested);

// Runs fn(0) .. fn(n-1) on up to `threads` workers.  The first exception
// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace dgff
