#pragma once

#include <cstddef>
#include <functional>

namespace liouville {

// Worker cap: min(hardware_concurrency, LIOUVILLE_THREADS if set).
int thread_count();

// Runs fn(i) for i in [0, n) on up to thread_count() threads with a static
// block partition. Callers write to disjoint slots, so results do not depend
// on the degree of parallelism.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace liouville
