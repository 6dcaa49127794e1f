#pragma once

#include "fpd/angle.hpp"
#include "fpd/complex_types.hpp"
#include "fpd/loop.hpp"
#include "fpd/mobius.hpp"

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace fpd {

// theta-dependent affine map w -> m(theta) w + d(theta). Coefficients are
// sampled on a uniform grid over T^1 (size 1 = constant family) and
// interpolated linearly in between.
class AffineFamily {
public:
    AffineFamily() = default;
    AffineFamily(std::vector<cplx> slope, std::vector<cplx> offset);
    static AffineFamily constant(cplx m, cplx d);

    cplx slope(double theta) const noexcept;
    cplx offset(double theta) const noexcept;
    cplx apply(double theta, cplx w) const noexcept {
        return slope(theta) * w + offset(theta);
    }
    int grid_size() const { return static_cast<int>(m_.size()); }

private:
    std::vector<cplx> m_{cplx(1.0)};
    std::vector<cplx> d_{cplx(0.0)};
};

// theta-dependent Mobius family. The action is scale invariant, so the raw
// coefficient rows are kept unnormalized and interpolated entrywise.
class MobiusFamily {
public:
    MobiusFamily() = default;
    explicit MobiusFamily(std::vector<std::array<cplx, 4>> coef);
    static MobiusFamily constant(const std::array<cplx, 4>& m);

    std::array<cplx, 4> at(double theta) const noexcept;
    int grid_size() const { return static_cast<int>(coef_.size()); }

private:
    std::vector<std::array<cplx, 4>> coef_{{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)}};
};

// Fiber families. The quadratic core is z^2 + C(theta); post-compositions
// keep the construction mechanisms of the toolkit. Pure interpolant fibers
// carry Lagrange-built dynamics of degree <= 1 and Mobius type.
struct QuadraticFiber {
    CoefficientLoop loop;
};
struct AffineQuadraticFiber {
    CoefficientLoop loop;
    AffineFamily post;
};
struct MobiusQuadraticFiber {
    CoefficientLoop loop;
    MobiusFamily post;
};
struct AffineFiber {
    AffineFamily family;
};
struct MobiusFiber {
    MobiusFamily family;
};

using Fiber = std::variant<QuadraticFiber, AffineQuadraticFiber, MobiusQuadraticFiber,
                           AffineFiber, MobiusFiber>;

// Skew product (theta, z) -> (theta + alpha, p_theta(z)). alpha = 0 is the
// static case (a parametrized family of maps of the plane).
struct FibredMap {
    Angle alpha;
    Fiber fiber;

    bool is_static() const { return alpha.value() == 0.0; }
};

inline FibredMap canonical_quadratic_map(Angle alpha, CoefficientLoop loop) {
    return FibredMap{alpha, QuadraticFiber{std::move(loop)}};
}

struct Orbit {
    std::vector<std::pair<Angle, cplx>> points;
    bool escaped = false;
    std::optional<int> escape_index;
};

// Nothrow evaluation used inside parallel sweeps; sphere infinities propagate
// as values and never throw. The per-alternative overloads let hot loops skip
// the variant dispatch.
inline cplx fiber_value_alt(const QuadraticFiber& f, double theta, cplx z) noexcept {
    return z * z + f.loop(theta);
}
inline cplx fiber_value_alt(const AffineQuadraticFiber& f, double theta, cplx z) noexcept {
    return f.post.apply(theta, z * z + f.loop(theta));
}
inline cplx fiber_value_alt(const MobiusQuadraticFiber& f, double theta, cplx z) noexcept {
    cplx w = is_sphere_infinity(z) ? sphere_infinity() : z * z + f.loop(theta);
    return mobius_apply(f.post.at(theta), w);
}
inline cplx fiber_value_alt(const AffineFiber& f, double theta, cplx z) noexcept {
    return f.family.apply(theta, z);
}
inline cplx fiber_value_alt(const MobiusFiber& f, double theta, cplx z) noexcept {
    return mobius_apply(f.family.at(theta), z);
}

inline cplx fiber_derivative_alt(const QuadraticFiber&, double, cplx z) noexcept {
    return 2.0 * z;
}
inline cplx fiber_derivative_alt(const AffineQuadraticFiber& f, double theta, cplx z) noexcept {
    return f.post.slope(theta) * 2.0 * z;
}
inline cplx fiber_derivative_alt(const MobiusQuadraticFiber& f, double theta, cplx z) noexcept {
    return mobius_derivative(f.post.at(theta), z * z + f.loop(theta)) * 2.0 * z;
}
inline cplx fiber_derivative_alt(const AffineFiber& f, double theta, cplx) noexcept {
    return f.family.slope(theta);
}
inline cplx fiber_derivative_alt(const MobiusFiber& f, double theta, cplx z) noexcept {
    return mobius_derivative(f.family.at(theta), z);
}

cplx fiber_value(const Fiber& fiber, double theta, cplx z) noexcept;
cplx fiber_derivative_value(const Fiber& fiber, double theta, cplx z) noexcept;

// Checked front ends. Infinite z is only legal for Mobius-type fibers;
// derivative poles raise std::domain_error.
cplx eval_fiber(const FibredMap& map, double theta, cplx z);
cplx fiber_derivative(const FibredMap& map, double theta, cplx z);

std::pair<Angle, cplx> eval(const FibredMap& map, std::pair<Angle, cplx> pt);

// Forward orbit of pt, recording up to n_steps images; stops early once
// |z| > escape_radius (the starting point counts).
Orbit iterate(const FibredMap& map, std::pair<Angle, cplx> pt, int n_steps,
              double escape_radius);

// max(4, sup|C|+1) for quadratic-core fibers, 4 otherwise.
double default_escape_radius(const FibredMap& map);

}  // namespace fpd
