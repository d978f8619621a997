#pragma once

#include <cstddef>
#include <functional>

namespace qi {

/// Calls body(i) for every i in [0, count) on up to `threads` workers
/// (0 picks the hardware concurrency). Indices are handed out dynamically;
/// callers write results by index so the outcome is independent of scheduling.
/// The first exception thrown by a body is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace qi
