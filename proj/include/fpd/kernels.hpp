#pragma once

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpd::kernels {

// Applies the MULTICURVE_THREADS cap once per process (no-op when unset).
void apply_thread_cap();

// Data-parallel index sweep. Bodies must not throw.
template <class Body>
void parallel_for(long n, Body&& body) {
    apply_thread_cap();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) body(i);
}

template <class Body>
void serial_for(long n, Body&& body) {
    for (long i = 0; i < n; ++i) body(i);
}

// Max-reductions are order independent, so the parallel and serial variants
// agree bitwise (no NaN inputs).
template <class Value>
double parallel_max(long n, Value&& value) {
    apply_thread_cap();
    double best = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best)
#endif
    for (long i = 0; i < n; ++i) best = std::max(best, value(i));
    return best;
}

template <class Value>
double serial_max(long n, Value&& value) {
    double best = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) best = std::max(best, value(i));
    return best;
}

}  // namespace fpd::kernels
