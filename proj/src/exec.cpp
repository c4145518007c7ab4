#include "plsys/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plsys {

namespace {
int default_threads = 0;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (default_threads == 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
#else
  (void)n;
  (void)default_threads;
#endif
}

}  // namespace plsys
