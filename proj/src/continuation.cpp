#include "fpd/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fpd {

cplx lambda_to_c(cplx lambda) { return lambda / 2.0 * (1.0 - lambda / 2.0); }

namespace {

constexpr double kClusterTol = 1e-10;

bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// ascending-coefficient helpers
std::vector<cplx> poly_square(const std::vector<cplx>& p) {
    std::vector<cplx> out(2 * p.size() - 1, cplx(0.0));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < p.size(); ++j) out[i + j] += p[i] * p[j];
    return out;
}

cplx poly_eval(const std::vector<cplx>& p, cplx z) {
    cplx acc(0.0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

cplx poly_deriv_eval(const std::vector<cplx>& p, cplx z) {
    cplx acc(0.0);
    for (size_t i = p.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * p[i];
    return acc;
}

// long division by a monic divisor, both ascending; returns quotient and the
// max remainder magnitude
std::pair<std::vector<cplx>, double> poly_divide_monic(std::vector<cplx> num,
                                                       const std::vector<cplx>& den) {
    const size_t dn = den.size() - 1;
    std::vector<cplx> quot(num.size() - dn, cplx(0.0));
    for (size_t i = num.size(); i-- > dn;) {
        cplx q = num[i];
        quot[i - dn] = q;
        for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= q * den[j];
    }
    double rem = 0.0;
    for (size_t j = 0; j < dn; ++j) rem = std::max(rem, std::abs(num[j]));
    return {std::move(quot), rem};
}

// Simultaneous-iteration (Aberth style) roots of an ascending-coefficient
// polynomial. Degrees here are tiny; a few hundred sweeps are plenty.
std::vector<cplx> aberth_roots(std::vector<cplx> coef) {
    const size_t deg = coef.size() - 1;
    cplx lead = coef.back();
    for (cplx& c : coef) c /= lead;
    double radius = 0.0;
    for (size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(coef[i]));
    radius = 1.0 + radius;

    std::vector<cplx> z(deg);
    for (size_t i = 0; i < deg; ++i)
        z[i] = radius * unit_circle((static_cast<double>(i) + 0.37) / static_cast<double>(deg));

    for (int sweep = 0; sweep < 500; ++sweep) {
        double worst = 0.0;
        for (size_t i = 0; i < deg; ++i) {
            cplx p = poly_eval(coef, z[i]);
            cplx dp = poly_deriv_eval(coef, z[i]);
            if (dp == cplx(0.0)) {
                z[i] += 1e-8;
                worst = 1.0;
                continue;
            }
            cplx newton = p / dp;
            cplx sum(0.0);
            for (size_t j = 0; j < deg; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            cplx w = newton / (1.0 - newton * sum);
            z[i] -= w;
            worst = std::max(worst, std::abs(w));
        }
        if (worst < 1e-13) break;
    }
    return z;
}

struct FiberPoly {
    cplx c;
    cplx eval(cplx z) const { return z * z + c; }
};

// G(z) = p^k(z) - z and its derivative through the orbit chain rule.
void cycle_residual(const FiberPoly& p, cplx z, int k, cplx& g, cplx& dg) {
    cplx w = z;
    cplx dw(1.0);
    for (int i = 0; i < k; ++i) {
        dw *= 2.0 * w;
        w = p.eval(w);
    }
    g = w - z;
    dg = dw - 1.0;
}

bool polish_cycle_point(const FiberPoly& p, int k, cplx& z, double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        cplx g, dg;
        cycle_residual(p, z, k, g, dg);
        if (std::abs(g) <= tol) return true;
        if (dg == cplx(0.0)) return false;
        z -= g / dg;
    }
    cplx g, dg;
    cycle_residual(p, z, k, g, dg);
    return std::abs(g) <= tol;
}

}  // namespace

std::vector<std::vector<cplx>> periodic_points(cplx c, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("periodic_points: k must be 1, 2 or 3");
    if (k == 1) {
        auto [z1, z2] = fixed_points(c);
        if (std::abs(z1 - z2) < kClusterTol)
            throw std::runtime_error("periodic_points: degenerate fixed points");
        return {{z1}, {z2}};
    }
    if (k == 2) {
        // deflation of p^2(z) - z by p(z) - z is z^2 + z + c + 1
        cplx s = std::sqrt(cplx(-3.0) - 4.0 * c);
        cplx r1 = (-1.0 + s) / 2.0;
        cplx r2 = (-1.0 - s) / 2.0;
        if (std::abs(r1 - r2) < kClusterTol)
            throw std::runtime_error("periodic_points: degenerate 2-cycle (parabolic parameter)");
        if (lex_less(r2, r1)) std::swap(r1, r2);
        return {{r1, r1 * r1 + c}};
    }

    // k = 3: roots of (p^3(z) - z)/(p(z) - z), degree 6
    std::vector<cplx> p1{c, cplx(0.0), cplx(1.0)};
    std::vector<cplx> p2 = poly_square(p1);
    p2[0] += c;
    std::vector<cplx> p3 = poly_square(p2);
    p3[0] += c;
    p3[1] -= 1.0;  // subtract z
    std::vector<cplx> den{c, cplx(-1.0), cplx(1.0)};  // p(z) - z
    auto [quot, rem] = poly_divide_monic(p3, den);
    if (rem > 1e-8)
        throw std::runtime_error("periodic_points: deflation remainder unexpectedly large");

    std::vector<cplx> roots = aberth_roots(quot);
    FiberPoly p{c};
    for (cplx& z : roots)
        if (!polish_cycle_point(p, 3, z, 1e-13, 40))
            throw std::runtime_error("periodic_points: 3-cycle polish failed");
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < kClusterTol)
                throw std::runtime_error("periodic_points: root cluster (degenerate parameter)");

    // group by orbit following
    std::vector<int> succ(6, -1);
    for (int i = 0; i < 6; ++i) {
        cplx img = p.eval(roots[i]);
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 6; ++j) {
            double d = std::abs(img - roots[j]);
            if (d < best) {
                best = d;
                succ[i] = j;
            }
        }
    }
    std::vector<char> seen(6, 0);
    std::vector<std::vector<cplx>> cycles;
    for (int i = 0; i < 6; ++i) {
        if (seen[i]) continue;
        std::vector<int> cyc;
        int j = i;
        while (!seen[j]) {
            seen[j] = 1;
            cyc.push_back(j);
            j = succ[j];
        }
        if (cyc.size() != 3 || j != i)
            throw std::runtime_error("periodic_points: orbit grouping failed (degenerate cycle)");
        // start each cycle at its lexicographically smallest point
        int start = 0;
        for (int t = 1; t < 3; ++t)
            if (lex_less(roots[cyc[t]], roots[cyc[start]])) start = t;
        std::vector<cplx> ordered{roots[cyc[start]], roots[cyc[(start + 1) % 3]],
                                  roots[cyc[(start + 2) % 3]]};
        cycles.push_back(std::move(ordered));
    }
    if (cycles.size() != 2)
        throw std::runtime_error("periodic_points: expected two 3-cycles");
    if (lex_less(cycles[1][0], cycles[0][0])) std::swap(cycles[0], cycles[1]);
    return cycles;
}

cplx CycleTrack::column_at(int branch, double row_pos) const {
    const long N = grid_size;
    int b = branch;
    while (row_pos >= static_cast<double>(N)) {
        row_pos -= static_cast<double>(N);
        b = monodromy[b];
    }
    long i = static_cast<long>(row_pos);
    if (i >= N) i = N - 1;
    double f = row_pos - static_cast<double>(i);
    if (f == 0.0) return points[i][b];
    return points[i][b] * (1.0 - f) + points[i + 1][b] * f;
}

namespace {

double min_pair_distance(const std::vector<cplx>& row) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < row.size(); ++i)
        for (size_t j = i + 1; j < row.size(); ++j)
            best = std::min(best, std::abs(row[i] - row[j]));
    return best;
}

}  // namespace

CycleTrack track_cycle(const CoefficientLoop& loop, int k, int N) {
    if (N < 16) throw std::invalid_argument("track_cycle: grid too small");
    CycleTrack track;
    track.period = k;
    track.loop = loop;
    track.grid_size = N;

    const cplx c0 = loop(0.0);
    std::vector<cplx> row;
    if (k == 1) {
        auto [z1, z2] = fixed_points(c0);
        if (std::abs(z1 - z2) < kClusterTol)
            throw std::runtime_error("track_cycle: loop starts at a degenerate parameter");
        row = {z1, z2};
    } else if (k == 2) {
        row = periodic_points(c0, 2).front();
    } else {
        auto cycles = periodic_points(c0, 3);
        auto [z1, z2] = fixed_points(c0);
        auto score = [&](const std::vector<cplx>& cyc) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& z : cyc)
                best = std::min({best, std::abs(z - z1), std::abs(z - z2)});
            return best;
        };
        // the implosive cycle hugs a fixed point; track that one
        row = score(cycles[0]) <= score(cycles[1]) ? cycles[0] : cycles[1];
    }
    const int m = static_cast<int>(row.size());

    track.points.assign(N + 1, row);
    double max_res = 0.0;

    const double min_step = std::ldexp(1.0, -20) / static_cast<double>(N);
    std::vector<cplx> prev_row = row;
    double h_prev = 0.0;
    bool have_prev = false;

    double theta = 0.0;
    for (int s = 0; s < N; ++s) {
        const double target = static_cast<double>(s + 1) / N;
        double h_try = 1.0 / static_cast<double>(N);
        while (theta < target) {
            double h = std::min(h_try, target - theta);
            bool last = (target - theta) <= h;
            double theta_next = last ? target : theta + h;
            FiberPoly p{loop(theta_next)};
            double guard = 0.25 * min_pair_distance(row);

            std::vector<cplx> next(m);
            bool ok = true;
            double step_res = 0.0;
            for (int j = 0; j < m && ok; ++j) {
                cplx z = row[j];
                if (have_prev && h_prev > 0.0)
                    z += (row[j] - prev_row[j]) * (h / h_prev);
                bool converged = false;
                for (int it = 0; it < 8; ++it) {
                    cplx g, dg;
                    cycle_residual(p, z, k, g, dg);
                    if (std::abs(g) <= 1e-12) {
                        converged = true;
                        step_res = std::max(step_res, std::abs(g));
                        break;
                    }
                    if (dg == cplx(0.0)) break;
                    z -= g / dg;
                }
                if (converged) {
                    cplx g, dg;
                    cycle_residual(p, z, k, g, dg);
                    step_res = std::max(step_res, std::abs(g));
                }
                if (!converged || std::abs(z - row[j]) > guard) ok = false;
                next[j] = z;
            }
            if (ok) {
                prev_row = row;
                h_prev = h;
                have_prev = true;
                row = std::move(next);
                theta = theta_next;
                max_res = std::max(max_res, step_res);
                h_try = std::min(h_try * 2.0, 1.0 / static_cast<double>(N));
            } else {
                h_try = h / 2.0;
                if (h_try < min_step)
                    throw std::runtime_error("track_cycle: continuation breakdown at theta=" +
                                             std::to_string(theta));
            }
        }
        track.points[s + 1] = row;
    }
    track.max_newton_residual = max_res;

    // monodromy by dominant nearest-neighbor matching of the final row
    const auto& first = track.points.front();
    const auto& final_row = track.points.back();
    track.monodromy.assign(m, -1);
    for (int j = 0; j < m; ++j) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        int arg = -1;
        for (int i = 0; i < m; ++i) {
            double d = std::abs(final_row[j] - first[i]);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                arg = i;
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (m > 1 && !(d2 >= 10.0 * d1))
            throw std::runtime_error("track_cycle: ambiguous monodromy matching");
        track.monodromy[j] = arg;
    }
    std::vector<char> hit(m, 0);
    for (int j = 0; j < m; ++j) hit[track.monodromy[j]] = 1;
    for (int j = 0; j < m; ++j)
        if (!hit[j]) throw std::runtime_error("track_cycle: monodromy is not a permutation");
    return track;
}

MultiCurve track_to_multicurve(const CycleTrack& track) {
    const int m = track.branch_count();
    const long N = track.grid_size;
    std::vector<char> seen(m, 0);
    std::vector<UnfoldingCurve> comps;
    int n_common = -1;
    for (int j0 = 0; j0 < m; ++j0) {
        if (seen[j0]) continue;
        std::vector<int> cyc;
        int j = j0;
        while (!seen[j]) {
            seen[j] = 1;
            cyc.push_back(j);
            j = track.monodromy[j];
        }
        const int n = static_cast<int>(cyc.size());
        if (n_common == -1) n_common = n;
        if (n != n_common)
            throw std::runtime_error("track_to_multicurve: mixed monodromy cycle lengths");

        std::vector<cplx> glued(static_cast<size_t>(n) * N);
        int b = cyc.front();
        for (int i = 0; i < n; ++i) {
            for (long s = 0; s < N; ++s) glued[i * N + s] = track.points[s][b];
            b = track.monodromy[b];
        }
        // base point: lexicographically smallest fiber point over theta = 0
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (lex_less(glued[i * N], glued[best * N])) best = i;
        if (best != 0)
            std::rotate(glued.begin(), glued.begin() + best * N, glued.end());
        comps.emplace_back(std::move(glued), n);
    }
    std::sort(comps.begin(), comps.end(), [](const UnfoldingCurve& a, const UnfoldingCurve& b) {
        return lex_less(a.base_point(), b.base_point());
    });
    return MultiCurve(std::move(comps), n_common);
}

MobiusFamily cycle_mobius_family(const MultiCurve& curve3, const CoefficientLoop& loop,
                                 double alpha) {
    if (curve3.winding() != 3 || curve3.component_count() != 1)
        throw std::invalid_argument("cycle_mobius_family: need a single 3-curve");
    const UnfoldingCurve& c = curve3.component(0);
    const long M = c.grid_size() / 3;
    const auto& s = c.samples();
    const double adv = alpha * static_cast<double>(M);

    std::vector<std::array<cplx, 4>> coef(M);
    for (long t = 0; t < M; ++t) {
        std::array<cplx, 3> fiber{s[t], s[M + t], s[2 * M + t]};
        cplx cval = loop(static_cast<double>(t) / static_cast<double>(M));
        // which fiber point each branch's q-image lands on
        std::array<int, 3> hit{-1, -1, -1};
        for (int i = 0; i < 3; ++i) {
            cplx img = fiber[i] * fiber[i] + cval;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < 3; ++j) {
                double d = std::abs(img - fiber[j]);
                if (d < best) {
                    best = d;
                    hit[i] = j;
                }
            }
        }
        if (hit[0] == hit[1] || hit[0] == hit[2] || hit[1] == hit[2])
            throw std::runtime_error("cycle_mobius_family: fiber is not a 3-cycle");
        // send the q-image of branch i back onto branch i advanced by alpha
        std::array<cplx, 3> src{fiber[hit[0]], fiber[hit[1]], fiber[hit[2]]};
        std::array<cplx, 3> dst{c.at_pos(0 * M + t + adv), c.at_pos(1 * M + t + adv),
                                c.at_pos(2 * M + t + adv)};
        coef[t] = mobius_coeffs_through(src, dst);
    }

    // Coefficient rows are only defined up to scale; normalize and phase-align
    // so entrywise interpolation between nodes stays on the intended family.
    auto norm_of = [](const std::array<cplx, 4>& r) {
        double n2 = 0.0;
        for (const cplx& e : r) n2 += std::norm(e);
        return std::sqrt(n2);
    };
    for (auto& r : coef) {
        double nr = norm_of(r);
        for (cplx& e : r) e /= nr;
    }
    for (long t = 1; t < M; ++t) {
        cplx inner(0.0);
        for (int e = 0; e < 4; ++e) inner += coef[t][e] * std::conj(coef[t - 1][e]);
        cplx phase = inner / std::abs(inner);
        for (cplx& e : coef[t]) e /= phase;
    }
    // close the chain: spread the leftover seam phase across the loop
    {
        cplx inner(0.0);
        for (int e = 0; e < 4; ++e) inner += coef[0][e] * std::conj(coef[M - 1][e]);
        cplx hol = inner / std::abs(inner);
        double arg = std::arg(hol);
        for (long t = 0; t < M; ++t) {
            cplx tw = std::polar(1.0, arg * static_cast<double>(t) / static_cast<double>(M));
            for (cplx& e : coef[t]) e *= tw;
        }
    }
    return MobiusFamily(std::move(coef));
}

Rational3Curve build_rational_3curve(const CoefficientLoop& loop, Angle alpha, int N) {
    Rational3Curve out;
    out.track = track_cycle(loop, 3, N);
    bool cyclic = true;
    int j = 0;
    for (int step = 0; step < 3; ++step) j = out.track.monodromy[j];
    for (int i = 0; i < 3; ++i) cyclic = cyclic && (out.track.monodromy[i] != i);
    if (!cyclic || j != 0)
        throw std::runtime_error("build_rational_3curve: loop monodromy is not a 3-cycle");

    out.curve = track_to_multicurve(out.track);
    MobiusFamily fam = cycle_mobius_family(out.curve, loop, alpha.value());
    out.map = FibredMap{alpha, MobiusQuadraticFiber{loop, std::move(fam)}};
    out.invariance_residual_value = invariance_residual(out.map, out.curve, 0);
    if (out.invariance_residual_value > 1e-8)
        throw std::runtime_error("build_rational_3curve: invariance residual above 1e-8");
    auto tau = detect_jumping_integer(out.map, out.curve);
    if (!tau || *tau != 0)
        throw std::runtime_error("build_rational_3curve: unexpected jumping integer");
    out.tau = 0;
    out.report = multiplier(out.map, out.curve, 0);
    return out;
}

}  // namespace fpd
