#pragma once

#include <cstddef>
#include <functional>

namespace cuspresp {

/// Number of worker threads to use: hardware concurrency, capped by the
/// CUSP_RESPONSE_THREADS environment variable when it is set.
int worker_count();

/// Runs fn(i) for i in [0, n). Work items must write to disjoint locations;
/// the partitioning into threads never affects the stored results, so
/// parallel and sequential runs produce identical bytes.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cuspresp
