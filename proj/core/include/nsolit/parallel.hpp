#pragma once

#include <cstddef>
#include <functional>

namespace nsolit {

/// Worker count: NSOLIT_THREADS if set (>= 1), else hardware concurrency.
[[nodiscard]] std::size_t thread_budget();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks; the
/// first exception thrown by any chunk is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nsolit
