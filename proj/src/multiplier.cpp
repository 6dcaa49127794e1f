#include "fpd/multiplier.hpp"

#include "fpd/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace fpd {

namespace {

constexpr double kDerivCutoff = 1e-13;
const double kLogCutoff = std::log(kDerivCutoff);
constexpr double kRefineStall = 1e-8;
constexpr double kRefineMinWidth = 9.5367431640625e-07;  // 2^-20

bool singular_phi(double phi) { return !std::isfinite(phi) || phi < kLogCutoff; }

}  // namespace

const char* curve_class_name(CurveClass c) {
    switch (c) {
        case CurveClass::Attracting: return "attracting";
        case CurveClass::Indifferent: return "indifferent";
        case CurveClass::Repulsor: return "repulsor";
        case CurveClass::SuperAttracting: return "super_attracting";
    }
    return "?";
}

namespace {

template <bool Parallel>
void log_deriv_fill(const FibredMap& map, const MultiCurve& curve, int comp,
                    std::vector<double>& phi) {
    const UnfoldingCurve& c = curve.component(comp);
    const long N = c.grid_size();
    const int n = curve.winding();
    const auto& s = c.samples();
    phi.assign(N, 0.0);
    const Fiber& fib = map.fiber;
    auto body = [&](long k) noexcept {
        double tb = static_cast<double>((k * n) % N) / static_cast<double>(N);
        phi[k] = std::log(std::abs(fiber_derivative_value(fib, tb, s[k])));
    };
    if constexpr (Parallel)
        kernels::parallel_for(N, body);
    else
        kernels::serial_for(N, body);
}

}  // namespace

void curve_log_deriv(const FibredMap& map, const MultiCurve& curve, int comp,
                     std::vector<double>& phi) {
    log_deriv_fill<true>(map, curve, comp, phi);
}

void curve_log_deriv_serial(const FibredMap& map, const MultiCurve& curve, int comp,
                            std::vector<double>& phi) {
    log_deriv_fill<false>(map, curve, comp, phi);
}

namespace {

// Integrates phi over [a, b] when one endpoint carries a log singularity:
// dyadic subdivision toward the singular end until the contribution stalls
// below 1e-8 or the remaining sliver is narrower than 2^-20.
template <class PhiFn>
double refine_toward(PhiFn&& phi_of, double clean_x, double clean_phi, double singular_x) {
    double acc = 0.0;
    double prev_x = clean_x;
    double prev_phi = clean_phi;
    double span = singular_x - clean_x;  // signed
    for (int m = 1;; ++m) {
        double x = singular_x - span * std::ldexp(1.0, -m);
        double ph = phi_of(x);
        if (singular_phi(ph)) break;  // singular zone reached, drop the rest
        double piece = 0.5 * (prev_phi + ph) * (x - prev_x);
        acc += piece;
        prev_x = x;
        prev_phi = ph;
        if (std::fabs(singular_x - x) <= kRefineMinWidth) break;
        if (std::fabs(piece) < kRefineStall) break;
    }
    return acc;
}

}  // namespace

MultiplierReport multiplier(const FibredMap& map, const MultiCurve& curve, int tau) {
    auto detected = detect_jumping_integer(map, curve);
    if (!detected || *detected != tau)
        throw std::invalid_argument("multiplier: tau is not the detected jumping integer");

    const int n = curve.winding();
    MultiplierReport report;
    report.grid_size = curve.component(0).grid_size();

    double total = 0.0;
    bool super = false;
    std::vector<double> phi;
    for (int comp = 0; comp < curve.component_count(); ++comp) {
        const UnfoldingCurve& c = curve.component(comp);
        const long N = c.grid_size();
        const double h = 1.0 / static_cast<double>(N);
        curve_log_deriv(map, curve, comp, phi);

        std::vector<char> sing(N, 0);
        long sing_count = 0;
        for (long k = 0; k < N; ++k) {
            if (singular_phi(phi[k])) {
                sing[k] = 1;
                ++sing_count;
                report.singular_angles.push_back(static_cast<double>(k) * h);
            }
        }
        if (sing_count * 4 > N) {  // nonisolated zero derivative: super-attracting signal
            super = true;
            continue;
        }

        auto phi_of = [&](double x) noexcept {
            double tb = Angle::wrap(n * Angle::wrap(x));
            return std::log(std::abs(fiber_derivative_value(map.fiber, tb, c.at(x))));
        };

        double integral = 0.0;
        for (long k = 0; k < N; ++k) {
            long k1 = (k + 1) % N;
            double a = static_cast<double>(k) * h;
            double b = a + h;
            bool sa = sing[k], sb = sing[k1];
            if (!sa && !sb) {
                integral += 0.5 * (phi[k] + phi[k1]) * h;
            } else if (!sa && sb) {
                integral += refine_toward(phi_of, a, phi[k], b);
            } else if (sa && !sb) {
                integral += refine_toward(phi_of, b, phi[k1], a);
            } else {
                double mid = a + 0.5 * h;
                double pm = phi_of(mid);
                if (!singular_phi(pm)) {
                    integral += refine_toward(phi_of, mid, pm, a);
                    integral += refine_toward(phi_of, mid, pm, b);
                }
            }
        }
        total += integral;
    }

    if (super) {
        report.kappa = 0.0;
        report.log_integral = 0.0;
        report.super_attracting = true;
        return report;
    }
    report.log_integral = total / curve.component_count();
    report.kappa = std::exp(report.log_integral);
    return report;
}

CurveClass classify(const MultiplierReport& report, double band) {
    if (report.super_attracting) return CurveClass::SuperAttracting;
    if (report.kappa < 1.0 - band) return CurveClass::Attracting;
    if (report.kappa > 1.0 + band) return CurveClass::Repulsor;
    return CurveClass::Indifferent;
}

LinearizationData birkhoff_linearize(const FibredMap& map, const MultiCurve& curve, int tau,
                                     double delta, long step_cap) {
    if (!(delta > 0.0)) throw std::invalid_argument("birkhoff_linearize: delta must be positive");
    MultiplierReport report = multiplier(map, curve, tau);
    CurveClass cls = classify(report);
    if (cls != CurveClass::Attracting && cls != CurveClass::Repulsor)
        throw std::invalid_argument("birkhoff_linearize: curve must be attracting or repulsor");
    if (!report.singular_angles.empty())
        throw std::invalid_argument("birkhoff_linearize: derivative vanishes on the curve");

    const bool attracting = cls == CurveClass::Attracting;
    const double m = report.log_integral;
    const int n = curve.winding();
    const int p = curve.component_count();
    const double rot = Angle::wrap((map.alpha.value() + tau) / n);
    // selection threshold slightly tighter than m +- delta, so the grid
    // certificate re-checked through the interpolated scale still clears c
    const double thr = attracting ? m + delta * (1.0 - 1e-3) : m - delta * (1.0 - 1e-3);

    std::vector<std::vector<double>> S(p), sumS(p);
    std::vector<long> Ns(p);
    long total_nodes = 0;
    for (int c = 0; c < p; ++c) {
        Ns[c] = curve.component(c).grid_size();
        S[c].assign(Ns[c], 0.0);
        sumS[c].assign(Ns[c], 0.0);
        total_nodes += Ns[c];
    }

    long steps = 0;
    std::visit(
        [&](const auto& fib) {
            double shift = 0.0;
            for (long k = 1; k <= step_cap; ++k) {
                for (int c = 0; c < p; ++c) {
                    const UnfoldingCurve& uc = curve.component(c);
                    const long N = Ns[c];
                    const double shiftN = shift * static_cast<double>(N);
                    double* Sd = S[c].data();
                    double* Ad = sumS[c].data();
                    kernels::parallel_for(N, [&](long i) noexcept {
                        Ad[i] += Sd[i];
                        double pos = static_cast<double>(i) + shiftN;
                        double x = pos / static_cast<double>(N);
                        double tb = Angle::wrap(n * Angle::wrap(x));
                        Sd[i] += std::log(
                            std::abs(fiber_derivative_alt(fib, tb, uc.at_pos(pos))));
                    });
                }
                shift = Angle::wrap(shift + rot);
                double extreme = attracting ? -1e300 : 1e300;
                for (int c = 0; c < p; ++c) {
                    if (attracting) {
                        double s = kernels::parallel_max(Ns[c], [&](long i) noexcept {
                            return S[c][i];
                        });
                        extreme = std::max(extreme, s);
                    } else {
                        double s = kernels::parallel_max(Ns[c], [&](long i) noexcept {
                            return -S[c][i];
                        });
                        extreme = std::min(extreme, -s);
                    }
                }
                double avg = extreme / static_cast<double>(k);
                if ((attracting && avg < thr) || (!attracting && avg > thr)) {
                    steps = k;
                    return;
                }
            }
        },
        map.fiber);
    if (steps == 0)
        throw std::runtime_error(
            "birkhoff_linearize: step cap exceeded (delta too small or multiplier too close to 1)");

    LinearizationData data;
    data.birkhoff_steps = steps;
    data.rotation = rot;
    data.margin = delta;
    data.bound = std::exp(attracting ? m + delta : m - delta);
    data.translate = curve.component(0).samples();
    data.scale.reserve(total_nodes);
    double mean_log = 0.0;
    for (int c = 0; c < p; ++c)
        for (long i = 0; i < Ns[c]; ++i) mean_log += sumS[c][i] / static_cast<double>(steps);
    mean_log /= static_cast<double>(total_nodes);
    for (int c = 0; c < p; ++c)
        for (long i = 0; i < Ns[c]; ++i)
            data.scale.push_back(std::exp(sumS[c][i] / static_cast<double>(steps) - mean_log));
    return data;
}

double fiber_distance(const MultiCurve& curve, double theta, cplx z) {
    const int n = curve.winding();
    double base = Angle::wrap(theta);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& comp : curve.components())
        for (int j = 0; j < n; ++j)
            best = std::min(best, std::abs(z - comp.at((base + j) / n)));
    return best;
}

namespace {

// One probe orbit: does the fiberwise distance drop below target within budget?
bool probe_contracts(const Fiber& fib, double alpha, const MultiCurve& curve, double theta0,
                     cplx z0, double target, int budget, double escape_radius) noexcept {
    double x = theta0;
    cplx z = z0;
    for (int step = 0; step <= budget; ++step) {
        double d = std::numeric_limits<double>::infinity();
        const int n = curve.winding();
        for (const auto& comp : curve.components())
            for (int j = 0; j < n; ++j)
                d = std::min(d, std::abs(z - comp.at((x + j) / n)));
        if (d <= target) return true;
        if (!(std::abs(z) <= escape_radius)) return false;
        z = fiber_value(fib, x, z);
        x = Angle::wrap(x + alpha);
    }
    return false;
}

}  // namespace

TubeEstimate tube_radius(const FibredMap& map, const MultiCurve& curve, int tau, int budget) {
    MultiplierReport report = multiplier(map, curve, tau);
    if (classify(report) != CurveClass::Attracting)
        throw std::invalid_argument("tube_radius: curve is not attracting");

    double sep = curve.min_fiber_separation();
    double r0 = 0.1 * (std::isfinite(sep) ? sep : 1.0);
    const double R = default_escape_radius(map);
    const int n = curve.winding();
    const double alpha = map.alpha.value();

    for (int level = 0; level < 20; ++level) {
        double r = r0 * std::ldexp(1.0, -level);
        std::atomic<bool> ok{true};
        long probes = 0;
        for (int comp = 0; comp < curve.component_count() && ok.load(); ++comp) {
            const UnfoldingCurve& c = curve.component(comp);
            const long N = c.grid_size();
            probes += 8 * N;
            kernels::parallel_for(8 * N, [&](long idx) noexcept {
                if (!ok.load(std::memory_order_relaxed)) return;
                long k = idx / 8;
                int dir = static_cast<int>(idx % 8);
                double x = static_cast<double>((k * n) % N) / static_cast<double>(N);
                cplx z = c.samples()[k] + r * unit_circle(dir / 8.0);
                if (!probe_contracts(map.fiber, alpha, curve, x, z, 0.5 * r, budget, R))
                    ok.store(false, std::memory_order_relaxed);
            });
        }
        if (ok.load()) return TubeEstimate{r, probes, budget};
    }
    throw std::runtime_error("tube_radius: no radius accepted (classification inconsistent)");
}

AttractionResult is_attracted(const FibredMap& map, std::pair<Angle, cplx> pt,
                              const MultiCurve& curve, int budget, double delta,
                              const TubeEstimate& tube) {
    const double target = std::min(delta, tube.radius);
    const double R = default_escape_radius(map);
    double x = pt.first.value();
    cplx z = pt.second;
    for (int step = 0; step <= budget; ++step) {
        if (is_sphere_infinity(z) || !(std::abs(z) <= R)) return AttractionResult::Escaped;
        if (fiber_distance(curve, x, z) < target) return AttractionResult::Attracted;
        z = fiber_value(map.fiber, x, z);
        x = Angle::wrap(x + map.alpha.value());
    }
    return AttractionResult::BudgetExhausted;
}

}  // namespace fpd
