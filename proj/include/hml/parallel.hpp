#pragma once

#include <cstddef>
#include <functional>

namespace hml {

/// Worker cap: HML_THREADS if set to a positive integer, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.  Callers write
/// results into slot i, so output order never depends on scheduling.  The
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hml
