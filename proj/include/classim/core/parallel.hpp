#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace classim {

/// Hardware concurrency, at least 1.
unsigned default_thread_count() noexcept;

/// Runs fn(i) for every i in [0, n) on up to `threads` workers.
///
/// Callers write results into per-index slots, so output never depends on the
/// thread count. If several indices throw, the exception of the lowest index
/// is rethrown after all workers have joined.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace classim
