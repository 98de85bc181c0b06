#pragma once

#include <cstdint>

namespace quadswe::threading {

/// Caps the OpenMP team size for all solver kernels. 0 = runtime default.
void set_num_threads(int n);
int num_threads();

/// Static-schedule parallel loop over [0, n). Falls back to a plain loop
/// when built without OpenMP or when set_num_threads(1) is in effect.
/// Bodies must write disjoint outputs; results are identical to the
/// serial loop regardless of team size.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn);

}  // namespace quadswe::threading

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadswe::threading {

namespace detail {
int& thread_cap();
}

template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#ifdef _OPENMP
  const int cap = detail::thread_cap();
  if (cap == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(cap > 0 ? cap : omp_get_max_threads())
  for (std::int64_t i = 0; i < n; ++i) fn(i);
#else
  for (std::int64_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace quadswe::threading
