#ifndef FAIRPOST_PARALLEL_H_
#define FAIRPOST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fairpost {

// Worker count from FAIRPOST_THREADS (default 1; 0 means hardware
// concurrency).
std::size_t thread_count();

// Calls fn(i) for i in [0, n) over contiguous chunks. Callers write results
// into per-index slots, so output never depends on the thread count. The
// first exception thrown by any chunk is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fairpost

#endif  // FAIRPOST_PARALLEL_H_
