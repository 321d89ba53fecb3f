#pragma once

#include <cstddef>
#include <functional>

namespace elastocq {

/// Worker count: ELASTOCQ_WORKERS if set, else hardware concurrency.
int worker_count();

/// Runs fn(begin, end) on contiguous chunks of [0, n) across workers and
/// joins.  Chunking is deterministic; callers own any reduction ordering.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Runs fn(k, worker_id) for k in [0, n), statically partitioned.
void parallel_for_workers(std::size_t n,
                          const std::function<void(std::size_t, int)>& fn);

}  // namespace elastocq
