#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace lagrome {

/// Worker cap for parallel loops; 0 means hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Calls body(i) for i in [0, count) over contiguous chunks.  The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise sum; result depends only on the order of `v`.
double pairwise_sum(std::span<const double> v);

}  // namespace lagrome
