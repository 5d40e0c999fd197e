#pragma once

#include <functional>

namespace trigdens {

// Thread count resolution: requested if > 0, else the TRIGDENS_THREADS
// environment variable, else hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) across `threads` workers. Work items must be
// independent; callers keep determinism by indexing results with i.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

}  // namespace trigdens
