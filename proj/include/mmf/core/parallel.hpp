#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmf {

// Thread cap from MMF_THREADS; 0 means the OpenMP default.
inline int thread_cap() {
  static const int cap = [] {
    const char* s = std::getenv("MMF_THREADS");
    if (!s) return 0;
    try {
      int v = std::stoi(s);
      return v > 0 ? v : 0;
    } catch (...) {
      return 0;
    }
  }();
  return cap;
}

// Element loop. Each iteration must write only to its own element's storage;
// reductions are done afterwards in element order so results do not depend on
// the thread count.
template <class F>
void for_each_element(int n_elements, F&& f) {
#ifdef _OPENMP
  const int cap = thread_cap();
  const int nt = cap > 0 ? cap : omp_get_max_threads();
  if (nt > 1 && n_elements > 1) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int e = 0; e < n_elements; ++e) f(e);
    return;
  }
#endif
  for (int e = 0; e < n_elements; ++e) f(e);
}

}  // namespace mmf
