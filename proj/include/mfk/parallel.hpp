#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfk {

enum class Exec { serial, parallel };

// Worker cap.  MFK_THREADS wins when set to a positive integer, otherwise the
// OpenMP default applies (1 in builds without OpenMP).
inline int max_threads() {
  if (const char* env = std::getenv("MFK_THREADS")) {
    char* endp = nullptr;
    const long v = std::strtol(env, &endp, 10);
    if (endp != env && *endp == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [0, count).  Iterations must be independent and write
// only their own output slots, so results cannot depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, const Fn& body, Exec exec = Exec::parallel) {
#ifdef _OPENMP
  if (exec == Exec::parallel && count > 1) {
    std::exception_ptr first;
    const int nt = max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(mfk_parallel_for_capture)
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace mfk
