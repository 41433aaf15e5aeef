#pragma once

#include <functional>

namespace ebm {

// Worker budget: EBM_THREADS (clamped to >= 1) when set, otherwise the
// hardware concurrency.
int thread_budget();

// Static block partition of [0, count) over at most max_threads workers
// (0 = thread_budget()). Falls back to the calling thread for small counts.
// Exceptions from the body are rethrown on the caller.
void parallel_for(int count, const std::function<void(int)>& body, int max_threads = 0);

} // namespace ebm
