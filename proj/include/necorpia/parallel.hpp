#ifndef NECORPIA_PARALLEL_HPP
#define NECORPIA_PARALLEL_HPP

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace necorpia {

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs fn(i) for i in [0, n). Iterations must be independent; each should
/// derive its own RNG from (seed, i) and write results only to slot i, so
/// the outcome is identical whether the loop runs serially or OpenMP-split.
template <typename Fn>
void for_each_index(uint64_t n, int threads, Fn&& fn) {
#ifdef _OPENMP
  if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) fn(static_cast<uint64_t>(i));
    return;
  }
#else
  (void)threads;
#endif
  for (uint64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace necorpia

#endif
