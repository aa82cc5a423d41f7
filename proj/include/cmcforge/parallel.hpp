#pragma once

#include <cstddef>
#include <functional>

namespace cmcforge {

// Worker count: CMCFORGE_THREADS when set, else hardware concurrency.
unsigned worker_count();

// Runs f(i) for i in [0, n) on up to worker_count() threads. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

} // namespace cmcforge
