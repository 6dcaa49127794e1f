#include "fpd/mobius.hpp"

#include <cmath>
#include <stdexcept>

namespace fpd {

cplx mobius_apply(const std::array<cplx, 4>& m, cplx z) noexcept {
    if (is_sphere_infinity(z)) {
        if (m[2] == cplx(0.0)) return sphere_infinity();
        return m[0] / m[2];
    }
    cplx den = m[2] * z + m[3];
    if (den == cplx(0.0)) return sphere_infinity();
    return (m[0] * z + m[1]) / den;
}

cplx mobius_derivative(const std::array<cplx, 4>& m, cplx z) noexcept {
    cplx den = m[2] * z + m[3];
    cplx det = m[0] * m[3] - m[1] * m[2];
    if (den == cplx(0.0)) return sphere_infinity();
    return det / (den * den);
}

cplx MobiusMap::derivative(cplx z) const {
    cplx d = mobius_derivative(coef, z);
    if (is_sphere_infinity(d)) throw std::domain_error("Mobius derivative pole");
    return d;
}

MobiusMap MobiusMap::normalized() const {
    cplx dt = det();
    if (dt == cplx(0.0)) throw std::domain_error("singular Mobius coefficients");
    cplx s = 1.0 / std::sqrt(dt);
    MobiusMap out{{coef[0] * s, coef[1] * s, coef[2] * s, coef[3] * s}};
    for (const cplx& c : out.coef) {
        if (std::abs(c) < 1e-14) continue;
        bool flip = c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0);
        if (flip)
            for (cplx& e : out.coef) e = -e;
        break;
    }
    return out;
}

namespace {

// Matrix of the cross-ratio map sending (z1, z2, z3) to (0, 1, inf); the
// usual limit forms when one node is the sphere infinity.
std::array<cplx, 4> to_standard_triple(const std::array<cplx, 3>& z) {
    const cplx &z1 = z[0], &z2 = z[1], &z3 = z[2];
    bool i1 = is_sphere_infinity(z1), i2 = is_sphere_infinity(z2), i3 = is_sphere_infinity(z3);
    if (i1) return {cplx(0.0), z2 - z3, cplx(1.0), -z3};
    if (i2) return {cplx(1.0), -z1, cplx(1.0), -z3};
    if (i3) return {cplx(1.0), -z1, cplx(0.0), z2 - z1};
    return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

std::array<cplx, 4> mobius_coeffs_through(const std::array<cplx, 3>& src,
                                          const std::array<cplx, 3>& dst) {
    auto distinct = [](const std::array<cplx, 3>& p) {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                bool ii = is_sphere_infinity(p[i]), ij = is_sphere_infinity(p[j]);
                if (ii && ij) return false;
                if (!ii && !ij && p[i] == p[j]) return false;
            }
        return true;
    };
    if (!distinct(src) || !distinct(dst))
        throw std::invalid_argument("mobius_through: coincident interpolation nodes");

    std::array<cplx, 4> a = to_standard_triple(src);
    std::array<cplx, 4> b = to_standard_triple(dst);
    // M = adj(b) * a
    return {b[3] * a[0] - b[1] * a[2], b[3] * a[1] - b[1] * a[3],
            -b[2] * a[0] + b[0] * a[2], -b[2] * a[1] + b[0] * a[3]};
}

MobiusMap mobius_through(const std::array<cplx, 3>& src, const std::array<cplx, 3>& dst) {
    MobiusMap out{mobius_coeffs_through(src, dst)};
    return out.normalized();
}

}  // namespace fpd
