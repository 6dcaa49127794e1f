#pragma once

#include "fpd/fibred_map.hpp"

#include <optional>
#include <vector>

namespace fpd {

// Closed curve in C given by N uniform samples over theta_k = k/N, winding n
// times over the base when folded through the n-fold covering.
class UnfoldingCurve {
public:
    UnfoldingCurve() = default;
    UnfoldingCurve(std::vector<cplx> samples, int winding);

    int grid_size() const { return static_cast<int>(samples_.size()); }
    int winding() const { return winding_; }
    const std::vector<cplx>& samples() const { return samples_; }
    cplx base_point() const { return samples_.front(); }

    // periodic linear interpolation, argument in turns / in grid positions
    cplx at(double theta) const noexcept;
    cplx at_pos(double pos) const noexcept;

private:
    std::vector<cplx> samples_{cplx(0.0)};
    int winding_ = 1;
};

// (p, n)-curve: p disjoint components, each an n-curve stored through its
// unfolding. The folded object is derived on demand.
class MultiCurve {
public:
    MultiCurve() = default;
    MultiCurve(std::vector<UnfoldingCurve> components, int winding);

    int winding() const { return winding_; }
    int component_count() const { return static_cast<int>(components_.size()); }
    const UnfoldingCurve& component(int i) const { return components_.at(i); }
    const std::vector<UnfoldingCurve>& components() const { return components_; }

    // the n fiber points of one component over base angle theta
    std::vector<cplx> fiber_points(int comp, double theta) const;
    std::vector<std::pair<double, cplx>> base_points() const;  // (0, samples[0]) per component

    // min distance between distinct fiber points over the sample grid
    // (pairs within a component and across components); +inf when n = p = 1.
    double min_fiber_separation() const;

private:
    std::vector<UnfoldingCurve> components_;
    int winding_ = 1;
};

// n-fold covering (theta, z) -> (<n theta>, z) together with a deck shift.
struct Covering {
    int n = 1;
    int tau = 0;

    std::pair<Angle, cplx> project(std::pair<Angle, cplx> pt) const {
        return {Angle(n * pt.first.value()), pt.second};
    }
    Angle deck(Angle theta) const { return theta + static_cast<double>(tau) / n; }
};

// Lift of a fibred map through the covering: base advances by (alpha+tau)/n,
// the fiber acts through the folded angle.
struct LiftedMap {
    FibredMap base;
    Covering covering;

    double rotation() const {
        return Angle::wrap((base.alpha.value() + covering.tau) / covering.n);
    }
    cplx fiber(double theta_cover, cplx z) const noexcept {
        return fiber_value(base.fiber, Angle::wrap(covering.n * theta_cover), z);
    }
    std::pair<Angle, cplx> eval(std::pair<Angle, cplx> pt) const {
        return {pt.first + rotation(), fiber(pt.first.value(), pt.second)};
    }
};

// Arc i (1-based, i in 1..n) of a folded component: gamma((i-1+t)/n) with the
// arc parameter t in [0,1].
cplx segment(const MultiCurve& curve, int component, int i, double t);

// Folds an unfolding into the induced single-component n-curve. Requires n to
// divide the grid size.
MultiCurve project(const UnfoldingCurve& unfolding, int n);

// The unique unfolding whose base point is fiber point base_choice over
// theta = 0, counted from the stored base point: gamma~_j(t) = gamma~(t + j/n).
UnfoldingCurve unfold(const MultiCurve& curve, int component, int base_choice);

LiftedMap lift_map(const FibredMap& map, int n, int tau);

// Sup over grid nodes and components of |f_<n t_k>(g(t_k)) - g(t_k + (a+tau)/n)|
// with the target grid-interpolated. OpenMP scan plus a serial reference.
double invariance_residual(const FibredMap& map, const MultiCurve& curve, int tau);
double invariance_residual_serial(const FibredMap& map, const MultiCurve& curve, int tau);

// The unique tau with residual below tol, or nullopt. Requires fibers
// separated by at least 10x tol; two residuals under tol is a degeneracy error.
std::optional<int> detect_jumping_integer(const FibredMap& map, const MultiCurve& curve,
                                          double tol = 1e-6);

// Fibred map whose fiber is the Lagrange-type interpolant sending
// gamma_i(theta) -> gamma_{i+tau}(theta + alpha): affine for two interpolation
// nodes, Mobius for three (n*p in {2,3}).
FibredMap lagrange_invariant_map(const MultiCurve& curve, Angle alpha, int tau);

}  // namespace fpd
