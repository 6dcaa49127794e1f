#include "fpd/curve.hpp"

#include "fpd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpd {

namespace {

// Grid-scale continuity: adjacent jumps (wrap included) bounded by 10x the
// median jump. A wrongly glued curve shows a diameter-sized seam here.
void check_closed(const UnfoldingCurve& c) {
    const auto& s = c.samples();
    const size_t n = s.size();
    std::vector<double> jumps(n);
    for (size_t k = 0; k < n; ++k) jumps[k] = std::abs(s[(k + 1) % n] - s[k]);
    std::vector<double> sorted = jumps;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    double median = sorted[n / 2];
    double worst = *std::max_element(jumps.begin(), jumps.end());
    if (worst > 10.0 * median)
        throw std::invalid_argument("unfolding not closed at grid scale (seam jump too large)");
}

void check_injective(const UnfoldingCurve& c) {
    const auto& s = c.samples();
    const long n = static_cast<long>(s.size());
    double scale = 0.0;
    for (const cplx& z : s) scale = std::max(scale, std::abs(z));
    const double tol = 1e-10 * (1.0 + scale);
    double min_neg = kernels::parallel_max(n, [&](long i) noexcept {
        double best = -std::numeric_limits<double>::infinity();
        for (long j = i + 1; j < n; ++j) best = std::max(best, -std::abs(s[i] - s[j]));
        return best;
    });
    if (n > 1 && -min_neg < tol)
        throw std::invalid_argument("degenerate curve: samples coincide at grid scale");
}

}  // namespace

UnfoldingCurve::UnfoldingCurve(std::vector<cplx> samples, int winding)
    : samples_(std::move(samples)), winding_(winding) {
    if (samples_.size() < 8) throw std::invalid_argument("unfolding: need at least 8 samples");
    if (winding_ < 1) throw std::invalid_argument("unfolding: winding must be >= 1");
    if (static_cast<int>(samples_.size()) % winding_ != 0)
        throw std::invalid_argument("unfolding: winding must divide the grid size");
}

cplx UnfoldingCurve::at_pos(double pos) const noexcept {
    const long n = static_cast<long>(samples_.size());
    double p = pos - std::floor(pos / static_cast<double>(n)) * static_cast<double>(n);
    if (p >= static_cast<double>(n)) p = 0.0;
    long i = static_cast<long>(p);
    if (i >= n) i = 0;
    double f = p - static_cast<double>(i);
    if (f == 0.0) return samples_[i];
    long j = i + 1 == n ? 0 : i + 1;
    return samples_[i] * (1.0 - f) + samples_[j] * f;
}

cplx UnfoldingCurve::at(double theta) const noexcept {
    return at_pos(Angle::wrap(theta) * static_cast<double>(samples_.size()));
}

MultiCurve::MultiCurve(std::vector<UnfoldingCurve> components, int winding)
    : components_(std::move(components)), winding_(winding) {
    if (components_.empty()) throw std::invalid_argument("multi-curve: no components");
    const int N = components_.front().grid_size();
    for (const auto& c : components_) {
        if (c.winding() != winding_)
            throw std::invalid_argument("multi-curve: component winding mismatch");
        if (c.grid_size() != N)
            throw std::invalid_argument("multi-curve: components must share one grid");
        if (N % winding_ != 0)
            throw std::invalid_argument("multi-curve: winding must divide the grid size");
        check_closed(c);
        check_injective(c);
    }
    // pairwise disjointness, checked fiberwise on the grid
    if (components_.size() > 1) {
        double sep = min_fiber_separation();
        double scale = 0.0;
        for (const auto& c : components_)
            for (const cplx& z : c.samples()) scale = std::max(scale, std::abs(z));
        if (sep < 1e-10 * (1.0 + scale))
            throw std::invalid_argument("multi-curve: components intersect at grid scale");
    }
}

std::vector<cplx> MultiCurve::fiber_points(int comp, double theta) const {
    const UnfoldingCurve& c = components_.at(comp);
    std::vector<cplx> out(winding_);
    double base = Angle::wrap(theta);
    for (int j = 0; j < winding_; ++j)
        out[j] = c.at((base + j) / winding_);
    return out;
}

std::vector<std::pair<double, cplx>> MultiCurve::base_points() const {
    std::vector<std::pair<double, cplx>> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.emplace_back(0.0, c.base_point());
    return out;
}

double MultiCurve::min_fiber_separation() const {
    const int n = winding_;
    const int p = component_count();
    if (n == 1 && p == 1) return std::numeric_limits<double>::infinity();
    const long N = components_.front().grid_size();
    const long stride = N / n;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < p; ++a) {
        const auto& sa = components_[a].samples();
        for (int b = a; b < p; ++b) {
            const auto& sb = components_[b].samples();
            for (int m = (a == b ? 1 : 0); m < n; ++m) {
                double worst = kernels::parallel_max(N, [&](long k) noexcept {
                    return -std::abs(sa[k] - sb[(k + m * stride) % N]);
                });
                best = std::min(best, -worst);
            }
        }
    }
    return best;
}

cplx segment(const MultiCurve& curve, int component, int i, double t) {
    const int n = curve.winding();
    if (component < 0 || component >= curve.component_count())
        throw std::out_of_range("segment: component index out of range");
    if (i < 1 || i > n) throw std::out_of_range("segment: arc index must lie in 1..n");
    if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("segment: arc parameter must lie in [0,1]");
    const UnfoldingCurve& c = curve.component(component);
    const double N = static_cast<double>(c.grid_size());
    return c.at_pos((static_cast<double>(i - 1) + t) * N / n);
}

MultiCurve project(const UnfoldingCurve& unfolding, int n) {
    if (n < 1) throw std::invalid_argument("project: fold count must be >= 1");
    if (unfolding.grid_size() % n != 0)
        throw std::invalid_argument("project: fold count must divide the grid size");
    UnfoldingCurve folded(unfolding.samples(), n);
    return MultiCurve({std::move(folded)}, n);
}

UnfoldingCurve unfold(const MultiCurve& curve, int component, int base_choice) {
    const int n = curve.winding();
    if (base_choice < 0 || base_choice >= n)
        throw std::out_of_range("unfold: base choice must lie in 0..n-1");
    const UnfoldingCurve& c = curve.component(component);
    const long N = c.grid_size();
    const long shift = static_cast<long>(base_choice) * (N / n);
    std::vector<cplx> rotated(N);
    for (long k = 0; k < N; ++k) rotated[k] = c.samples()[(k + shift) % N];
    return UnfoldingCurve(std::move(rotated), n);
}

LiftedMap lift_map(const FibredMap& map, int n, int tau) {
    if (n < 1) throw std::invalid_argument("lift_map: fold count must be >= 1");
    if (tau < 0 || tau >= n) throw std::invalid_argument("lift_map: deck shift must lie in 0..n-1");
    return LiftedMap{map, Covering{n, tau}};
}

namespace {

template <bool Parallel>
double residual_scan(const FibredMap& map, const MultiCurve& curve, int tau) {
    const int n = curve.winding();
    double worst = 0.0;
    for (const auto& comp : curve.components()) {
        const long N = comp.grid_size();
        const auto& s = comp.samples();
        const double shift = (map.alpha.value() + tau) / n * static_cast<double>(N);
        const Fiber& fib = map.fiber;
        auto defect = [&](long k) noexcept -> double {
            double tb = static_cast<double>((k * n) % N) / static_cast<double>(N);
            cplx fz = fiber_value(fib, tb, s[k]);
            cplx target = comp.at_pos(static_cast<double>(k) + shift);
            double d = std::abs(fz - target);
            return std::isfinite(d) ? d : std::numeric_limits<double>::max();
        };
        double r = Parallel ? kernels::parallel_max(N, defect) : kernels::serial_max(N, defect);
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace

double invariance_residual(const FibredMap& map, const MultiCurve& curve, int tau) {
    if (tau < 0 || tau >= curve.winding())
        throw std::invalid_argument("invariance_residual: tau out of range");
    return residual_scan<true>(map, curve, tau);
}

double invariance_residual_serial(const FibredMap& map, const MultiCurve& curve, int tau) {
    if (tau < 0 || tau >= curve.winding())
        throw std::invalid_argument("invariance_residual: tau out of range");
    return residual_scan<false>(map, curve, tau);
}

std::optional<int> detect_jumping_integer(const FibredMap& map, const MultiCurve& curve,
                                          double tol) {
    const int n = curve.winding();
    double sep = curve.min_fiber_separation();
    if (std::isfinite(sep) && sep < 10.0 * tol)
        throw std::runtime_error("detect_jumping_integer: fibers closer than 10x tolerance");
    int best = -1;
    double best_res = std::numeric_limits<double>::infinity();
    int below = 0;
    for (int tau = 0; tau < n; ++tau) {
        double r = invariance_residual(map, curve, tau);
        if (r <= tol) ++below;
        if (r < best_res) {
            best_res = r;
            best = tau;
        }
    }
    if (below > 1)
        throw std::runtime_error("detect_jumping_integer: ambiguous (two deck shifts fit)");
    if (best_res <= tol) return best;
    return std::nullopt;
}

FibredMap lagrange_invariant_map(const MultiCurve& curve, Angle alpha, int tau) {
    const int n = curve.winding();
    const int p = curve.component_count();
    const int nodes = n * p;
    if (nodes != 2 && nodes != 3)
        throw std::invalid_argument("lagrange_invariant_map: supports 2 (affine) or 3 (Mobius) nodes");
    if (tau < 0 || tau >= n) throw std::invalid_argument("lagrange_invariant_map: tau out of range");

    const long N = curve.component(0).grid_size();
    const double a = alpha.value();

    auto node_list = [&](long k, std::vector<cplx>& src, std::vector<cplx>& dst) {
        src.clear();
        dst.clear();
        for (int c = 0; c < p; ++c) {
            const auto& comp = curve.component(c);
            const double M = static_cast<double>(comp.grid_size());
            for (int i = 0; i < n; ++i) {
                double base = static_cast<double>(k) / static_cast<double>(N);
                src.push_back(comp.at_pos((base + i) / n * M));
                dst.push_back(comp.at_pos((base + i + tau + a) / n * M));
            }
        }
    };

    std::vector<cplx> src, dst;
    if (nodes == 2) {
        std::vector<cplx> m(N), d(N);
        for (long k = 0; k < N; ++k) {
            node_list(k, src, dst);
            if (std::abs(src[0] - src[1]) < 1e-12)
                throw std::invalid_argument("lagrange_invariant_map: coincident interpolation nodes");
            m[k] = (dst[0] - dst[1]) / (src[0] - src[1]);
            d[k] = dst[0] - m[k] * src[0];
        }
        FibredMap out{alpha, AffineFiber{AffineFamily(std::move(m), std::move(d))}};
        double r = invariance_residual(out, curve, tau);
        if (r > 1e-9)
            throw std::runtime_error("lagrange_invariant_map: construction residual above 1e-9");
        return out;
    }

    std::vector<std::array<cplx, 4>> coef(N);
    for (long k = 0; k < N; ++k) {
        node_list(k, src, dst);
        coef[k] = mobius_coeffs_through({src[0], src[1], src[2]}, {dst[0], dst[1], dst[2]});
    }
    FibredMap out{alpha, MobiusFiber{MobiusFamily(std::move(coef))}};
    double r = invariance_residual(out, curve, tau);
    if (r > 1e-9)
        throw std::runtime_error("lagrange_invariant_map: construction residual above 1e-9");
    return out;
}

}  // namespace fpd
