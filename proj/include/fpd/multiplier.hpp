#pragma once

#include "fpd/curve.hpp"

#include <utility>
#include <vector>

namespace fpd {

struct MultiplierReport {
    double kappa = 1.0;
    double log_integral = 0.0;
    int grid_size = 0;
    std::vector<double> singular_angles;  // grid angles with |d/dz| below cutoff
    bool super_attracting = false;
};

enum class CurveClass { Attracting, Indifferent, Repulsor, SuperAttracting };

const char* curve_class_name(CurveClass c);

// log |d/dz p^_theta(gamma~(theta_k))| along one component's unfolding grid,
// evaluated through the lifted fiber. Parallel fill plus serial reference.
void curve_log_deriv(const FibredMap& map, const MultiCurve& curve, int comp,
                     std::vector<double>& phi);
void curve_log_deriv_serial(const FibredMap& map, const MultiCurve& curve, int comp,
                            std::vector<double>& phi);

// Fibred multiplier kappa = exp(mean over components of the log integral),
// trapezoid on the unfolding grid with dyadic refinement around isolated
// zeros of the derivative. tau must be the detected jumping integer.
MultiplierReport multiplier(const FibredMap& map, const MultiCurve& curve, int tau);

CurveClass classify(const MultiplierReport& report, double band = 1e-6);

struct LinearizationData {
    long birkhoff_steps = 0;        // N of the averaging
    std::vector<double> scale;      // a(theta) on the grid, geometric mean 1
    double bound = 0.0;             // c with sup (inf) of the conjugated derivative
    std::vector<cplx> translate;    // b(theta) = curve samples (component 0)
    double rotation = 0.0;          // lifted rotation (alpha+tau)/n
    double margin = 0.0;            // delta used
};

// Constructive linearization: smallest N whose Birkhoff average of
// phi = log|d/dz| along the lifted rotation satisfies sup S_N/N < m + delta
// (attracting; inf > m - delta for the repulsor case). The conjugated
// derivative modulus on the curve equals exp(S_N/N), so c = exp(m +- delta).
LinearizationData birkhoff_linearize(const FibredMap& map, const MultiCurve& curve, int tau,
                                     double delta, long step_cap = 1000000);

struct TubeEstimate {
    double radius = 0.0;
    long verified_samples = 0;
    int iterate_budget = 0;
};

// Probe-based attraction tube: largest radius from the geometric schedule
// r0 = 0.1 * min fiber separation, factor 1/2, 20 levels, such that all
// probed points halve their fiberwise distance to the curve within budget.
TubeEstimate tube_radius(const FibredMap& map, const MultiCurve& curve, int tau, int budget);

enum class AttractionResult { Attracted, Escaped, BudgetExhausted };

// Fiberwise distance from z to the curve at base angle theta.
double fiber_distance(const MultiCurve& curve, double theta, cplx z);

// True orbit test: attracted iff the orbit enters fiberwise distance
// min(delta, tube.radius) of the curve within budget steps.
AttractionResult is_attracted(const FibredMap& map, std::pair<Angle, cplx> pt,
                              const MultiCurve& curve, int budget, double delta,
                              const TubeEstimate& tube);

}  // namespace fpd
