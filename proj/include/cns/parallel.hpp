#pragma once

#include <cstddef>
#include <functional>

namespace cns {

/// Worker count: min(hardware_concurrency, CARLESON_NS_THREADS when set).
int worker_count();

/// Runs fn(begin..end) split into contiguous chunks across workers and
/// joins. fn must be safe to run concurrently on disjoint ranges.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace cns
