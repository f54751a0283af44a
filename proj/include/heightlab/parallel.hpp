#pragma once

#include <cstddef>
#include <functional>

namespace heightlab {

/// Worker count used by the parallel scans (default: hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Work is
/// split into fixed contiguous blocks, so callers that write results by index
/// get output independent of the thread count. The first exception thrown by
/// any block is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace heightlab
