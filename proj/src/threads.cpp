#include "efs/threads.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace efs {
namespace {
#ifdef _OPENMP
const int g_default_threads = omp_get_max_threads();
#endif
}  // namespace

void set_max_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads < 1 ? g_default_threads : threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace efs
