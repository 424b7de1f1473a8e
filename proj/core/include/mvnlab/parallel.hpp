#pragma once

#include <cstdint>
#include <functional>

namespace mvnlab {

// Worker cap: MVNLAB_THREADS when set (>= 1), hardware concurrency otherwise.
int thread_budget();

// Runs fn(0..n-1) across at most thread_budget() workers.  Iterations must be
// independent; callers keep determinism by writing to per-index slots and
// assembling output sequentially afterwards.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace mvnlab
