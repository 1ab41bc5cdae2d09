#pragma once

#include <cstddef>
#include <functional>

namespace rcausal {

/// Worker count: ROBUST_CAUSAL_THREADS if set to a positive integer, else
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for every i in [0, n), spread over worker_count() threads.
/// Each index runs exactly once; the first exception thrown is rethrown
/// after all workers stop. Callers write results into per-index slots so
/// the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rcausal
