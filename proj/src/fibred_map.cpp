#include "fpd/fibred_map.hpp"

#include <stdexcept>

namespace fpd {

namespace {

template <class T>
T interp_periodic(const std::vector<T>& v, double theta) noexcept {
    const size_t n = v.size();
    if (n == 1) return v[0];
    double pos = Angle::wrap(theta) * static_cast<double>(n);
    size_t i = static_cast<size_t>(pos);
    if (i >= n) i = 0;
    double f = pos - static_cast<double>(i);
    if (f == 0.0) return v[i];
    size_t j = i + 1 == n ? 0 : i + 1;
    return v[i] * (1.0 - f) + v[j] * f;
}

std::array<cplx, 4> lerp_coef(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b,
                              double f) noexcept {
    return {a[0] * (1.0 - f) + b[0] * f, a[1] * (1.0 - f) + b[1] * f,
            a[2] * (1.0 - f) + b[2] * f, a[3] * (1.0 - f) + b[3] * f};
}

}  // namespace

AffineFamily::AffineFamily(std::vector<cplx> slope, std::vector<cplx> offset)
    : m_(std::move(slope)), d_(std::move(offset)) {
    if (m_.empty() || m_.size() != d_.size())
        throw std::invalid_argument("affine family: slope/offset grids must match and be nonempty");
}

AffineFamily AffineFamily::constant(cplx m, cplx d) {
    return AffineFamily({m}, {d});
}

cplx AffineFamily::slope(double theta) const noexcept { return interp_periodic(m_, theta); }
cplx AffineFamily::offset(double theta) const noexcept { return interp_periodic(d_, theta); }

MobiusFamily::MobiusFamily(std::vector<std::array<cplx, 4>> coef) : coef_(std::move(coef)) {
    if (coef_.empty()) throw std::invalid_argument("Mobius family: empty coefficient grid");
}

MobiusFamily MobiusFamily::constant(const std::array<cplx, 4>& m) {
    return MobiusFamily({m});
}

std::array<cplx, 4> MobiusFamily::at(double theta) const noexcept {
    const size_t n = coef_.size();
    if (n == 1) return coef_[0];
    double pos = Angle::wrap(theta) * static_cast<double>(n);
    size_t i = static_cast<size_t>(pos);
    if (i >= n) i = 0;
    double f = pos - static_cast<double>(i);
    if (f == 0.0) return coef_[i];
    size_t j = i + 1 == n ? 0 : i + 1;
    return lerp_coef(coef_[i], coef_[j], f);
}

cplx fiber_value(const Fiber& fiber, double theta, cplx z) noexcept {
    return std::visit([&](const auto& f) { return fiber_value_alt(f, theta, z); }, fiber);
}

cplx fiber_derivative_value(const Fiber& fiber, double theta, cplx z) noexcept {
    return std::visit([&](const auto& f) { return fiber_derivative_alt(f, theta, z); }, fiber);
}

namespace {

bool mobius_kind(const Fiber& fiber) {
    return std::holds_alternative<MobiusQuadraticFiber>(fiber) ||
           std::holds_alternative<MobiusFiber>(fiber);
}

}  // namespace

cplx eval_fiber(const FibredMap& map, double theta, cplx z) {
    if (is_sphere_infinity(z) && !mobius_kind(map.fiber))
        throw std::domain_error("eval_fiber: infinite input needs a Mobius fiber");
    return fiber_value(map.fiber, theta, z);
}

cplx fiber_derivative(const FibredMap& map, double theta, cplx z) {
    if (is_sphere_infinity(z))
        throw std::domain_error("fiber_derivative: finite input required");
    cplx d = fiber_derivative_value(map.fiber, theta, z);
    if (is_sphere_infinity(d))
        throw std::domain_error("fiber_derivative: derivative pole at the given point");
    return d;
}

std::pair<Angle, cplx> eval(const FibredMap& map, std::pair<Angle, cplx> pt) {
    return {pt.first + map.alpha, eval_fiber(map, pt.first.value(), pt.second)};
}

Orbit iterate(const FibredMap& map, std::pair<Angle, cplx> pt, int n_steps,
              double escape_radius) {
    if (n_steps < 0) throw std::invalid_argument("iterate: n_steps must be >= 0");
    if (!(escape_radius > 0.0)) throw std::invalid_argument("iterate: escape radius must be positive");
    Orbit orbit;
    orbit.points.reserve(static_cast<size_t>(n_steps) + 1);
    orbit.points.push_back(pt);
    for (int k = 0;; ++k) {
        const cplx& z = orbit.points.back().second;
        if (is_sphere_infinity(z) || std::abs(z) > escape_radius) {
            orbit.escaped = true;
            orbit.escape_index = k;
            break;
        }
        if (k == n_steps) break;
        orbit.points.push_back(eval(map, orbit.points.back()));
    }
    return orbit;
}

double default_escape_radius(const FibredMap& map) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, QuadraticFiber> ||
                          std::is_same_v<T, AffineQuadraticFiber> ||
                          std::is_same_v<T, MobiusQuadraticFiber>) {
                return std::max(4.0, f.loop.sup_abs() + 1.0);
            } else {
                return 4.0;
            }
        },
        map.fiber);
}

}  // namespace fpd
