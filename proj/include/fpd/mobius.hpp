#pragma once

#include "fpd/complex_types.hpp"

#include <array>

namespace fpd {

// Raw 2x2 coefficient action on the sphere; infinities are legal values.
cplx mobius_apply(const std::array<cplx, 4>& m, cplx z) noexcept;
// d/dz (az+b)/(cz+d) = (ad-bc)/(cz+d)^2; infinite at the pole.
cplx mobius_derivative(const std::array<cplx, 4>& m, cplx z) noexcept;

// Fractional linear map of the Riemann sphere.
struct MobiusMap {
    std::array<cplx, 4> coef{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};  // a b c d

    cplx det() const { return coef[0] * coef[3] - coef[1] * coef[2]; }
    cplx operator()(cplx z) const noexcept { return mobius_apply(coef, z); }
    cplx derivative(cplx z) const;  // throws on the pole

    // ad-bc = 1 with a deterministic sign: the first nonzero coefficient gets
    // positive real part (positive imaginary part on ties).
    MobiusMap normalized() const;
};

// The unique Mobius map with M(src[i]) = dst[i]; points may be the sphere
// infinity, but each triple must be pairwise distinct.
MobiusMap mobius_through(const std::array<cplx, 3>& src, const std::array<cplx, 3>& dst);

// Raw (unnormalized) coefficients of the same map. Polynomial in the nodes,
// hence continuous along node families.
std::array<cplx, 4> mobius_coeffs_through(const std::array<cplx, 3>& src,
                                          const std::array<cplx, 3>& dst);

}  // namespace fpd
