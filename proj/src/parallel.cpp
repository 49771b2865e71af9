#include "gfrob/parallel.hpp"

namespace gfrob::parallel {

namespace {
#ifdef GFROB_HAVE_OPENMP
const int default_threads = omp_get_max_threads();
#endif
}  // namespace

void set_thread_count(int n) {
#ifdef GFROB_HAVE_OPENMP
    omp_set_num_threads(n > 0 ? n : default_threads);
#else
    (void)n;
#endif
}

int thread_count() {
#ifdef GFROB_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace gfrob::parallel
