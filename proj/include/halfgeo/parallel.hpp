#pragma once

#include <cstddef>
#include <functional>

namespace halfgeo {

/// Worker count from HALFGEO_JOBS, else the hardware concurrency.
int default_jobs();

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index slots so the outcome is schedule independent. The
/// exception of the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace halfgeo
