#pragma once

#include <cstddef>
#include <functional>

namespace radial {

/// Worker count: RADIAL_LAB_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads.
/// Exceptions from the body are rethrown (the first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace radial
