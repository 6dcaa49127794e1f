#include "fpd/constructions.hpp"

#include <cmath>
#include <stdexcept>

namespace fpd {

namespace {

bool power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

void require_grid(int N) {
    if (N < 8 || !power_of_two(N))
        throw std::invalid_argument("construction grid size must be a power of two >= 8");
}

void require_small_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.01))
        throw std::invalid_argument("construction expects 0 <= alpha <= 0.01");
}

// gamma~(t) = 1/2 + eps e^{2 pi i t} sqrt(1 + x0 e^{-4 pi i t}); the radicand
// stays in the right half plane for x0 < 1/4, so the principal branch is the
// continuous one.
cplx fixed_point_unfolding(double eps, double x0, double t) {
    return 0.5 + eps * unit_circle(t) * std::sqrt(1.0 + x0 * unit_circle(-2.0 * t));
}

}  // namespace

std::pair<cplx, cplx> fixed_points(cplx c) {
    cplx s = std::sqrt(cplx(0.25) - c);
    return {cplx(0.5) + s, cplx(0.5) - s};
}

StaticTwoCurve build_static_two_curve(double eps, double x0, int N) {
    require_grid(N);
    StaticTwoCurve out;
    out.eps = eps;
    out.x0 = x0;
    out.loop = CoefficientLoop::parabolic2(eps, x0);  // validates the parameter conditions

    out.z1.resize(N);
    out.z2.resize(N);
    std::vector<cplx> unfolding(N);
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        out.z1[k] = fixed_point_unfolding(eps, x0, t / 2.0);
        out.z2[k] = 1.0 - out.z1[k];  // fixed points of z^2 + c sum to 1
        unfolding[k] = fixed_point_unfolding(eps, x0, t);
    }
    out.curve = project(UnfoldingCurve(std::move(unfolding), 2), 2);

    // fixed-point identity on the grid
    FibredMap static_map = canonical_quadratic_map(Angle(0.0), out.loop);
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        cplx c = out.loop(t);
        if (std::abs(out.z1[k] * out.z1[k] + c - out.z1[k]) > 1e-12 ||
            std::abs(out.z2[k] * out.z2[k] + c - out.z2[k]) > 1e-12)
            throw std::runtime_error("static two-curve: fixed-point identity failed");
    }
    if (invariance_residual(static_map, out.curve, 0) > 1e-12)
        throw std::runtime_error("static two-curve: invariance failed");
    return out;
}

std::pair<cplx, cplx> affine_lagrange(std::pair<cplx, cplx> src, std::pair<cplx, cplx> dst) {
    if (std::abs(src.first - src.second) < 1e-14)
        throw std::invalid_argument("affine_lagrange: coincident source points");
    cplx m = (dst.first - dst.second) / (src.first - src.second);
    cplx d = dst.first - m * src.first;
    return {m, d};
}

AffineFamily two_curve_advance_family(const UnfoldingCurve& unfolding, double alpha) {
    if (unfolding.winding() != 2)
        throw std::invalid_argument("advance family needs a winding-2 unfolding");
    const long N = unfolding.grid_size();
    const double half = static_cast<double>(N) / 2.0;
    const double adv = alpha * static_cast<double>(N) / 2.0;
    std::vector<cplx> m(N), d(N);
    for (long k = 0; k < N; ++k) {
        double x = static_cast<double>(k) / 2.0;  // lifted half-angle position
        auto md = affine_lagrange({unfolding.at_pos(x), unfolding.at_pos(x + half)},
                                  {unfolding.at_pos(x + adv), unfolding.at_pos(x + half + adv)});
        m[k] = md.first;
        d[k] = md.second;
    }
    return AffineFamily(std::move(m), std::move(d));
}

namespace {

TwoCurveSystem compose_two_curve(CoefficientLoop loop, MultiCurve curve, double alpha,
                                 int expected_tau) {
    AffineFamily fam = two_curve_advance_family(curve.component(0), alpha);
    FibredMap map{Angle(alpha), AffineQuadraticFiber{std::move(loop), std::move(fam)}};
    double r = invariance_residual(map, curve, expected_tau);
    if (r > 1e-9)
        throw std::runtime_error("two-curve post-composition: residual above 1e-9");
    auto tau = detect_jumping_integer(map, curve);
    if (!tau || *tau != expected_tau)
        throw std::runtime_error("two-curve post-composition: unexpected jumping integer");
    return TwoCurveSystem{std::move(map), std::move(curve)};
}

}  // namespace

TwoCurveSystem post_compose_tau0(double eps, double x0, double alpha, int N) {
    require_small_alpha(alpha);
    StaticTwoCurve s = build_static_two_curve(eps, x0, N);
    return compose_two_curve(s.loop, std::move(s.curve), alpha, 0);
}

TwoCurveSystem tau1_period2(double eps, double alpha, int N) {
    require_grid(N);
    require_small_alpha(alpha);
    if (!(eps > 0.0 && eps <= 0.1))
        throw std::invalid_argument("tau1_period2 expects 0 < eps <= 0.1");

    CoefficientLoop loop = CoefficientLoop::circle(cplx(-0.75), -eps * eps);
    std::vector<cplx> unfolding(N);
    for (int k = 0; k < N; ++k)
        unfolding[k] = -0.5 + eps * unit_circle(static_cast<double>(k) / N);

    // period-2 identity p_t(z1(t)) = z2(t) on the grid
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        cplx z1 = -0.5 + eps * unit_circle(t / 2.0);
        cplx z2 = -0.5 - eps * unit_circle(t / 2.0);
        if (std::abs(z1 * z1 + loop(t) - z2) > 1e-12 || std::abs(z2 * z2 + loop(t) - z1) > 1e-12)
            throw std::runtime_error("tau1_period2: period-2 identity failed");
    }

    MultiCurve curve = project(UnfoldingCurve(std::move(unfolding), 2), 2);
    return compose_two_curve(std::move(loop), std::move(curve), alpha, 1);
}

namespace {

// log A(t) through principal logarithms; both radicands live in the right
// half plane, so this is the continuous branch.
cplx log_A(double x0, double alpha, double t) {
    constexpr double kPi = 3.1415926535897932384626433832795;
    return cplx(0.0, kPi * alpha) +
           0.5 * (std::log(1.0 + x0 * unit_circle(-(t + alpha))) -
                  std::log(1.0 + x0 * unit_circle(-t)));
}

cplx u_product(double x0, double alpha, int depth, double t) {
    cplx acc(0.0);
    double w = 0.5;
    for (int j = 0; j < depth; ++j) {
        acc += w * log_A(x0, alpha, t + j * alpha);
        w *= 0.5;
    }
    return std::exp(-acc);  // u = 1/v
}

}  // namespace

cplx NormalizationData::u_at(double theta) const { return u_product(x0_, alpha, depth, theta); }
cplx NormalizationData::A_at(double theta) const { return std::exp(log_A(x0_, alpha, theta)); }

NormalizationData normalization(double x0, double alpha, int N, int depth) {
    if (depth < 1) throw std::invalid_argument("normalization: depth must be >= 1");
    if (!(x0 >= 0.0 && x0 < 0.25))
        throw std::invalid_argument("normalization: need 0 <= x0 < 1/4");
    require_grid(N);

    NormalizationData out;
    out.depth = depth;
    out.alpha = alpha;
    out.x0_ = x0;
    out.A.resize(N);
    out.u.resize(N);
    std::vector<cplx> logs(N);
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        logs[k] = log_A(x0, alpha, t);
        out.A[k] = std::exp(logs[k]);
        out.u[k] = u_product(x0, alpha, depth, t);
    }
    for (int k = 0; k < N; ++k) {
        double jump = std::fabs(logs[(k + 1) % N].imag() - logs[k].imag());
        if (jump > 1.5707963267948966)
            throw std::runtime_error("normalization: branch continuity lost, grid too coarse");
    }
    double worst = 0.0;
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        worst = std::max(worst,
                         std::abs(out.u_at(t + alpha) - out.A[k] * out.u[k] * out.u[k]));
    }
    out.functional_residual = worst;
    return out;
}

CanonicalTwoCurve canonical_two_curve(double eps, double x0, double alpha, int N, int depth) {
    require_small_alpha(alpha);
    StaticTwoCurve s = build_static_two_curve(eps, x0, N);
    NormalizationData norm = normalization(x0, alpha, N, depth);

    // Constant coefficient of the composed map A(t) w + d(t) applied to
    // z^2 + C(t); d comes from the advance of the unfolding by alpha/2.
    const UnfoldingCurve& gamma = s.curve.component(0);
    std::vector<cplx> loop0(N);
    for (int k = 0; k < N; ++k) {
        double t = static_cast<double>(k) / N;
        double x = t / 2.0;  // lifted representative of the fiber over t
        cplx d = fixed_point_unfolding(eps, x0, x + alpha / 2.0) -
                 norm.A[k] * fixed_point_unfolding(eps, x0, x);
        loop0[k] = (norm.A[k] * s.loop(t) + d) / norm.u_at(t + alpha);
    }
    FibredMap map = canonical_quadratic_map(Angle(alpha), CoefficientLoop::sampled(loop0));

    CanonicalTwoCurve out;
    out.map = map;

    // u-argument convention in the unfolding: folded u(<2t>) against lifted u(t)
    double residual_f = 0.0, residual_l = 0.0;
    {
        std::vector<cplx> gf(N), gl(N);
        for (int k = 0; k < N; ++k) {
            gf[k] = gamma.samples()[k] / norm.u[(2 * k) % N];
            gl[k] = gamma.samples()[k] / norm.u[k];
        }
        MultiCurve curve_f = project(UnfoldingCurve(std::move(gf), 2), 2);
        residual_f = invariance_residual(map, curve_f, 0);
        MultiCurve curve_l = project(UnfoldingCurve(std::move(gl), 2), 2);
        residual_l = invariance_residual(map, curve_l, 0);
        if (residual_f <= 1e-6) {
            out.curve = std::move(curve_f);
            out.u_convention = 'f';
            out.invariance_residual_value = residual_f;
        } else if (residual_l <= 1e-6) {
            out.curve = std::move(curve_l);
            out.u_convention = 'l';
            out.invariance_residual_value = residual_l;
        } else {
            throw std::runtime_error(
                "canonical_two_curve: neither u-argument convention is invariant (folded " +
                std::to_string(residual_f) + ", lifted " + std::to_string(residual_l) + ")");
        }
    }

    out.report = multiplier(map, out.curve, 0);
    if (x0 > 0.0) {
        if (!(out.report.kappa < 1.0))
            throw std::runtime_error("canonical_two_curve: expected an attracting curve");
    } else if (std::fabs(out.report.kappa - 1.0) > 1e-6) {
        throw std::runtime_error("canonical_two_curve: expected an indifferent curve");
    }

    double lu = 0.0, la = 0.0;
    for (int k = 0; k < N; ++k) {
        lu += std::log(std::abs(norm.u[k] / 2.0));
        la += std::log(std::abs(2.0 * norm.A[k]));
    }
    out.log_u_half_integral = lu / N;
    out.log_2A_integral = la / N;
    return out;
}

}  // namespace fpd
