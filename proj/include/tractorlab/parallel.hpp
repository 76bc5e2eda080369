#pragma once

#include <cstddef>
#include <functional>

namespace tractorlab {

/// Worker count: TRACTORLAB_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results
/// must be written to per-index slots so the outcome does not depend on
/// scheduling. The exception thrown for the smallest index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tractorlab
