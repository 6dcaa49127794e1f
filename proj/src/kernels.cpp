#include "fpd/kernels.hpp"

#include <cstdlib>
#include <mutex>

namespace fpd::kernels {

void apply_thread_cap() {
#ifdef _OPENMP
    static std::once_flag once;
    std::call_once(once, [] {
        if (const char* cap = std::getenv("MULTICURVE_THREADS")) {
            int n = std::atoi(cap);
            if (n > 0) omp_set_num_threads(n);
        }
    });
#endif
}

}  // namespace fpd::kernels
