#pragma once
// Index-parallel loop. Each index writes only its own slot, so results do not
// depend on the thread count.

#include <cstddef>
#include <functional>

namespace specfrob {

// SPECFROB_THREADS if set and positive, otherwise the hardware concurrency.
int thread_count();

// Runs f(0..n-1). The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace specfrob
