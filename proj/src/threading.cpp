#include "quadswe/threading.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadswe::threading {

namespace detail {
int& thread_cap() {
  static int cap = 0;
  return cap;
}
}  // namespace detail

void set_num_threads(int n) { detail::thread_cap() = n < 0 ? 0 : n; }

int num_threads() {
#ifdef _OPENMP
  const int cap = detail::thread_cap();
  return cap > 0 ? cap : omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace quadswe::threading
