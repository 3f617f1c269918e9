#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "senskit/types.hpp"

namespace senskit {

// Process-wide cap on worker threads (0 = hardware concurrency).
void set_max_threads(int n);
int max_threads();

// Static contiguous chunking over [begin, end). Tasks must write disjoint
// outputs; results are then independent of scheduling.
template <typename Fn>
void parallel_for(Index begin, Index end, Fn&& fn) {
  const Index n = end - begin;
  if (n <= 0) return;
  const int nt = std::max<int>(1, std::min<Index>(max_threads(), n));
  if (nt == 1) {
    for (Index i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  const Index chunk = (n + nt - 1) / nt;
  for (int t = 1; t < nt; ++t) {
    const Index lo = begin + t * chunk;
    const Index hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (Index i = lo; i < hi; ++i) fn(i);
    });
  }
  const Index hi0 = std::min(end, begin + chunk);
  for (Index i = begin; i < hi0; ++i) fn(i);
  for (auto& th : pool) th.join();
}

}  // namespace senskit
