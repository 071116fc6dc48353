#ifndef DIFFRED_PARALLEL_HPP
#define DIFFRED_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace diffred {

/// Thread count from DIFFRED_THREADS when set, otherwise hardware concurrency.
int default_thread_count();

/// Resolves a user-supplied thread request: 0 means auto.
int resolve_threads(int requested);

/// Splits [0, total) into a fixed number of blocks and runs
/// fn(block_index, begin, end) for each, distributing blocks over
/// `threads` workers. The block layout depends only on `total`, never on
/// the thread count, so per-block results are identical regardless of
/// scheduling; callers merge them in block order.
void parallel_blocks(std::size_t total, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace diffred

#endif
