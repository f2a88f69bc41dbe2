#pragma once

#include <cstddef>
#include <functional>

namespace aluthge {

// Thread cap from ALUTHGE_THREADS (0 or unset = hardware concurrency).
std::size_t thread_cap();

// Runs fn(i) for i in [0, n). Tasks must write to disjoint, pre-sized slots;
// result ordering is the caller's index order regardless of scheduling.
// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aluthge
