#pragma once

#include "fpd/multiplier.hpp"

namespace fpd {

// Fixed points of q_c(z) = z^2 + c: 1/2 +- sqrt(1/4 - c), principal branch,
// the first entry carrying the nonnegative real part of the root term.
std::pair<cplx, cplx> fixed_points(cplx c);

// Fixed-point 2-curve of the static family C(t) = 1/4 - eps^2 x0 - eps^2 e^{2 pi i t}.
// Unfolding gamma~(t) = 1/2 + eps e^{2 pi i t} sqrt(1 + x0 e^{-4 pi i t}).
struct StaticTwoCurve {
    double eps = 0.0;
    double x0 = 0.0;
    std::vector<cplx> z1, z2;  // fixed-point branches on the theta grid
    MultiCurve curve;          // winding-2 curve holding the unfolding
    CoefficientLoop loop;      // the parabolic2 loop
};

StaticTwoCurve build_static_two_curve(double eps, double x0, int N);

// Affine map (m, d) with m src_i + d = dst_i for both node pairs.
std::pair<cplx, cplx> affine_lagrange(std::pair<cplx, cplx> src, std::pair<cplx, cplx> dst);

struct TwoCurveSystem {
    FibredMap map;     // folded system: base rotation alpha, fiber l^_theta o q_C(theta)
    MultiCurve curve;  // the invariant 2-curve
};

// Post-composition construction around c = 1/4: affine family advancing the
// unfolding by alpha/2, jumping integer 0.
TwoCurveSystem post_compose_tau0(double eps, double x0, double alpha, int N);

// Period-2 construction around c = -3/4: same advance family over the
// period-2 curve, jumping integer 1.
TwoCurveSystem tau1_period2(double eps, double alpha, int N);

// The scale data A, u of the canonical-form normalization:
//   A(t) = e^{pi i a} sqrt(1 + x0 e^{-2 pi i (t+a)}) / sqrt(1 + x0 e^{-2 pi i t}),
//   u = 1/v with v(t) = prod_{j<J} A(t + j a)^{1/2^{j+1}},
// satisfying u(t+a) = A(t) u(t)^2 up to the reported residual.
struct NormalizationData {
    std::vector<cplx> A;
    std::vector<cplx> u;
    int depth = 0;  // truncation J
    double alpha = 0.0;
    double functional_residual = 0.0;

    // direct evaluation of the truncated product at arbitrary angle
    cplx u_at(double theta) const;
    cplx A_at(double theta) const;

private:
    friend NormalizationData normalization(double, double, int, int);
    double x0_ = 0.0;
};

NormalizationData normalization(double x0, double alpha, int N, int depth);

struct CanonicalTwoCurve {
    FibredMap map;  // canonical form z^2 + C0(theta)
    MultiCurve curve;
    MultiplierReport report;
    double invariance_residual_value = 0.0;
    char u_convention = 'f';       // 'f' folded u(<2t>), 'l' lifted u(t)
    double log_u_half_integral = 0.0;  // measured int log|u/2|
    double log_2A_integral = 0.0;      // measured int log|2A|
};

// Canonical-form system carrying the normalized 2-curve gamma~/u. Both
// u-argument conventions are tried; the invariant one is kept and reported.
CanonicalTwoCurve canonical_two_curve(double eps, double x0, double alpha, int N, int depth);

// Builds the alpha/2-advance affine family of a winding-2 unfolding, sampled
// on the folded base grid.
AffineFamily two_curve_advance_family(const UnfoldingCurve& unfolding, double alpha);

}  // namespace fpd
