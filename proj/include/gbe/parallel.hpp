#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gbe {

// Number of workers to use when the caller passes 0: the GBELAB_WORKERS
// environment variable if set, otherwise std::thread::hardware_concurrency().
unsigned resolve_workers(unsigned requested);

// Runs fn(i) for i in [0, count) on `workers` threads. Work items are handed
// out through an atomic counter; each item writes only to its own slot, so
// results never depend on the thread assignment. Exceptions are captured and
// the first one is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

// Pairwise (tree) summation: deterministic shape, independent of worker count,
// and more accurate than a running sum for long arrays.
double pairwise_sum(std::span<const double> xs);

// Mean via pairwise summation; 0 for an empty span.
double pairwise_mean(std::span<const double> xs);

// Sample central moments 2..4 about `center`, each via pairwise summation
// (divided by n, not n-1).
struct CentralMoments {
    double m2 = 0, m3 = 0, m4 = 0;
};
CentralMoments central_moments(std::span<const double> xs, double center);

} // namespace gbe
