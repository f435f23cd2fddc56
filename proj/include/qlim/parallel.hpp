#pragma once

#include <cstddef>
#include <functional>

namespace qlim {

/// Worker count: QLIM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(begin, end) on contiguous chunks of [0, n), one chunk per
/// worker. Exceptions from any chunk are rethrown on the caller's thread.
void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qlim
