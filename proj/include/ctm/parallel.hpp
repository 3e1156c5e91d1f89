#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ctm {

// threads <= 0 means "OpenMP default".
inline int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

// Runs body(i) for i in [0, n). Iterations must only write to slots owned by
// i; the first exception thrown by any iteration is rethrown on return.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::exception_ptr failure;
#ifdef _OPENMP
  const int team = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ctm_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
#else
  (void)threads;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
#endif
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ctm
