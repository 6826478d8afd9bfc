#pragma once

#include <cstddef>
#include <functional>

namespace ept {

/// EPT_LAB_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned default_threads();

/// Runs fn(0..n-1) on up to `threads` workers (0 = default_threads()).
/// Work items must write to disjoint outputs; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace ept
