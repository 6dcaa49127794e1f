#pragma once

#include "fpd/multiplier.hpp"

#include <array>
#include <vector>

namespace fpd {

// Two-to-one correspondence between the lambda plane and the c plane:
// lambda -> lambda/2 (1 - lambda/2).
cplx lambda_to_c(cplx lambda);

// Periodic points of q_c of exact period k in {1,2,3}, grouped into cycles in
// orbit order. k=1 returns the two fixed points as singleton cycles, k=2 the
// single 2-cycle, k=3 the two 3-cycles (roots of the degree-6 deflation,
// simultaneous-iteration solve). Root clustering under 1e-10 is a
// degeneracy error.
std::vector<std::vector<cplx>> periodic_points(cplx c, int k);

// Continuation record of periodic branches along a parameter loop.
// Rows s = 0..N at theta_s = s/N; row entries are orbit-ordered, so
// p_theta(points[s][j]) is points[s][j+1 mod cycle]. monodromy[j] is the
// row-0 index that branch j lands on after the full loop.
struct CycleTrack {
    int period = 1;  // k of the tracked points
    CoefficientLoop loop;
    int grid_size = 0;  // N
    std::vector<std::vector<cplx>> points;  // (N+1) rows x m branches
    std::vector<int> monodromy;
    double max_newton_residual = 0.0;

    int branch_count() const { return monodromy.empty() ? 0 : static_cast<int>(monodromy.size()); }
    // column value at fractional row position, following the monodromy past
    // the seam at theta = 1
    cplx column_at(int branch, double row_pos) const;
};

// Predictor-corrector Newton continuation of the period-k branches around the
// loop. k=1 tracks both fixed points, k=3 tracks the cycle nearest a fixed
// point of the theta=0 fiber.
CycleTrack track_cycle(const CoefficientLoop& loop, int k, int N);

// Monodromy cycles become n-curves: each length-n cycle glues its branches in
// permutation order into one unfolding (grid n*N). Components are labeled by
// lexicographically smallest base point.
MultiCurve track_to_multicurve(const CycleTrack& track);

struct Rational3Curve {
    FibredMap map;  // (theta, z) -> (theta + alpha, M_theta(z^2 + C(theta)))
    MultiCurve curve;
    CycleTrack track;
    MultiplierReport report;
    double invariance_residual_value = 0.0;
    int tau = 0;
};

// Mobius post-composition closing a tracked 3-cycle into an invariant
// 3-curve: per base angle the family sends the q-image of each branch to the
// same branch at theta + alpha.
Rational3Curve build_rational_3curve(const CoefficientLoop& loop, Angle alpha, int N);

// The Mobius family above, derived from the glued curve (also used to rebuild
// the map when verifying stored curves).
MobiusFamily cycle_mobius_family(const MultiCurve& curve3, const CoefficientLoop& loop,
                                 double alpha);

}  // namespace fpd
