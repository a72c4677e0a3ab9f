// Replica fan-out over a fixed pool of worker threads.
#pragma once

#include <cstddef>
#include <functional>

namespace frozenperc {

unsigned default_workers();

/// Calls body(i) for every i in [0, count), spread over `workers` threads
/// (0 means default_workers()). Results must be written to per-index slots;
/// the first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace frozenperc
