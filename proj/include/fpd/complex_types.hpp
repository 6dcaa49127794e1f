#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace fpd {

using cplx = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Riemann-sphere infinity is carried as a non-finite complex value.
inline bool is_sphere_infinity(const cplx& z) {
    return !(std::isfinite(z.real()) && std::isfinite(z.imag()));
}

inline cplx sphere_infinity() {
    return {std::numeric_limits<double>::infinity(), 0.0};
}

inline cplx unit_circle(double turns) {
    return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)};
}

}  // namespace fpd
