#pragma once

#include <cstddef>
#include <functional>

namespace unlk {

// Worker count: the UNLK_THREADS environment variable when set to a positive
// integer, otherwise the hardware concurrency (at least 1).
int thread_budget();

// Runs fn(0), ..., fn(count-1) across the thread budget. Order is
// unspecified; results must be written to disjoint slots. The first worker
// exception is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace unlk
