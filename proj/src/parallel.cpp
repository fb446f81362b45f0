#include "maxent/parallel.hpp"

namespace maxent {

void set_worker_count(int workers) noexcept {
#ifdef _OPENMP
    if (workers > 0) {
        omp_set_num_threads(workers);
    } else {
        omp_set_num_threads(omp_get_num_procs());
    }
#else
    (void)workers;
#endif
}

int worker_count() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace maxent
