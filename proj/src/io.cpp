#include "fpd/io.hpp"

#include "fpd/kernels.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpd {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_ppm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "P6\n" << img.w << " " << img.h << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

namespace {

int escape_steps(const Fiber& fib, double alpha, double theta, cplx z, int max_iter,
                 double radius, bool static_base) noexcept {
    double x = theta;
    for (int t = 0; t < max_iter; ++t) {
        if (is_sphere_infinity(z) || !(std::abs(z) <= radius)) return t;
        z = fiber_value(fib, x, z);
        if (!static_base) x = Angle::wrap(x + alpha);
    }
    return -1;
}

template <bool Parallel>
std::vector<int> escape_sweep(const FibredMap& map, double theta, const RenderWindow& win,
                              int max_iter, double radius, bool static_base) {
    std::vector<int> counts(static_cast<size_t>(win.px_w) * win.px_h, -1);
    const Fiber& fib = map.fiber;
    const double alpha = map.alpha.value();
    auto body = [&](long idx) noexcept {
        int px = static_cast<int>(idx % win.px_w);
        int py = static_cast<int>(idx / win.px_w);
        counts[idx] = escape_steps(fib, alpha, theta, win.pixel_point(px, py), max_iter,
                                   radius, static_base);
    };
    const long n = static_cast<long>(counts.size());
    if constexpr (Parallel)
        kernels::parallel_for(n, body);
    else
        kernels::serial_for(n, body);
    return counts;
}

void paint_escape(RasterImage& img, const std::vector<int>& counts, int max_iter) {
    for (int py = 0; py < img.h; ++py)
        for (int px = 0; px < img.w; ++px) {
            int it = counts[static_cast<size_t>(py) * img.w + px];
            if (it < 0) {
                img.set(px, py, 0, 0, 0);
            } else {
                int v = 40 + (215 * it) / max_iter;
                if (v > 255) v = 255;
                img.set(px, py, static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v),
                        static_cast<unsigned char>(128 + v / 2));
            }
        }
}

}  // namespace

std::vector<int> escape_counts(const FibredMap& map, double theta, const RenderWindow& win,
                               int max_iter, double escape_radius, bool static_base) {
    return escape_sweep<true>(map, theta, win, max_iter, escape_radius, static_base);
}

std::vector<int> escape_counts_serial(const FibredMap& map, double theta, const RenderWindow& win,
                                      int max_iter, double escape_radius, bool static_base) {
    return escape_sweep<false>(map, theta, win, max_iter, escape_radius, static_base);
}

RasterImage render_fiber_slice(const SliceScene& scene) {
    if (!scene.map) throw std::invalid_argument("render_fiber_slice: missing map");
    if (scene.window.px_w < 16 || scene.window.px_h < 16)
        throw std::invalid_argument("render_fiber_slice: resolution must be at least 16x16");
    if (scene.max_iter < 1) throw std::invalid_argument("render_fiber_slice: max_iter must be >= 1");
    if (!(scene.window.width > 0.0))
        throw std::invalid_argument("render_fiber_slice: window width must be positive");

    RasterImage img;
    img.w = scene.window.px_w;
    img.h = scene.window.px_h;
    img.rgb.assign(static_cast<size_t>(img.w) * img.h * 3, 0);

    if (scene.mode == SliceMode::Julia) {
        auto counts = escape_counts(*scene.map, scene.theta, scene.window, scene.max_iter,
                                    scene.escape_radius, scene.static_base);
        paint_escape(img, counts, scene.max_iter);
        return img;
    }

    if (!scene.curve || !scene.tube)
        throw std::invalid_argument("render_fiber_slice: basin/tube modes need a curve and tube");
    const FibredMap& map = *scene.map;
    const MultiCurve& curve = *scene.curve;
    const TubeEstimate& tube = *scene.tube;
    const bool tube_mode = scene.mode == SliceMode::Tube;
    std::vector<char> mask(static_cast<size_t>(img.w) * img.h, 0);
    kernels::parallel_for(static_cast<long>(mask.size()), [&](long idx) noexcept {
        int px = static_cast<int>(idx % img.w);
        int py = static_cast<int>(idx / img.w);
        cplx z = scene.window.pixel_point(px, py);
        if (tube_mode && fiber_distance(curve, scene.theta, z) >= tube.radius) return;
        auto r = is_attracted(map, {Angle(scene.theta), z}, curve, scene.max_iter, scene.delta,
                              tube);
        mask[idx] = r == AttractionResult::Attracted ? 1 : 0;
    });
    for (int py = 0; py < img.h; ++py)
        for (int px = 0; px < img.w; ++px)
            if (mask[static_cast<size_t>(py) * img.w + px]) img.set(px, py, 255, 255, 255);
    return img;
}

RasterImage render_parameter_space(ParamKind kind, const RenderWindow& win, int max_iter,
                                   double escape_radius) {
    if (win.px_w < 16 || win.px_h < 16)
        throw std::invalid_argument("render_parameter_space: resolution must be at least 16x16");
    if (max_iter < 1) throw std::invalid_argument("render_parameter_space: max_iter must be >= 1");
    std::vector<int> counts(static_cast<size_t>(win.px_w) * win.px_h, -1);
    kernels::parallel_for(static_cast<long>(counts.size()), [&](long idx) noexcept {
        int px = static_cast<int>(idx % win.px_w);
        int py = static_cast<int>(idx / win.px_w);
        cplx param = win.pixel_point(px, py);
        cplx z = kind == ParamKind::MandelbrotC ? cplx(0.0) : -param / 2.0;
        for (int t = 0; t < max_iter; ++t) {
            if (!(std::abs(z) <= escape_radius)) {
                counts[idx] = t;
                return;
            }
            z = kind == ParamKind::MandelbrotC ? z * z + param : param * z + z * z;
        }
    });
    RasterImage img;
    img.w = win.px_w;
    img.h = win.px_h;
    img.rgb.assign(static_cast<size_t>(img.w) * img.h * 3, 0);
    paint_escape(img, counts, max_iter);
    return img;
}

void write_curve_csv(const MultiCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const int p = curve.component_count();
    const long N = curve.component(0).grid_size();
    out << "theta";
    for (int c = 0; c < p; ++c) out << ",re_" << c << ",im_" << c;
    out << "\n";
    for (long k = 0; k < N; ++k) {
        out << format_double(static_cast<double>(k) / static_cast<double>(N));
        for (int c = 0; c < p; ++c) {
            const cplx& z = curve.component(c).samples()[k];
            out << "," << format_double(z.real()) << "," << format_double(z.imag());
        }
        out << "\n";
    }
}

void write_curve_sidecar(const MultiCurve& curve, const std::string& path,
                         const std::string& recipe_json) {
    json j;
    j["schema"] = 1;
    j["n"] = curve.winding();
    j["p"] = curve.component_count();
    j["N"] = curve.component(0).grid_size();
    json bp = json::array();
    for (const auto& [theta, z] : curve.base_points()) bp.push_back({z.real(), z.imag()});
    j["base_points"] = bp;
    j["recipe"] = recipe_json.empty() ? json() : json::parse(recipe_json);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

MultiCurve read_curve(const std::string& csv_path, const std::string& sidecar_path) {
    std::ifstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    json j = json::parse(side);
    const int n = j.at("n").get<int>();
    const int p = j.at("p").get<int>();
    const long N = j.at("N").get<long>();

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty curve CSV");
    std::vector<std::vector<cplx>> cols(p);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (static_cast<int>(vals.size()) != 1 + 2 * p)
            throw std::runtime_error("curve CSV row has the wrong column count");
        for (int c = 0; c < p; ++c) cols[c].emplace_back(vals[1 + 2 * c], vals[2 + 2 * c]);
    }
    if (static_cast<long>(cols[0].size()) != N)
        throw std::runtime_error("curve CSV row count disagrees with the sidecar");
    std::vector<UnfoldingCurve> comps;
    comps.reserve(p);
    for (int c = 0; c < p; ++c) comps.emplace_back(std::move(cols[c]), n);
    return MultiCurve(std::move(comps), n);
}

std::string read_sidecar_recipe(const std::string& sidecar_path) {
    std::ifstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    json j = json::parse(side);
    if (!j.contains("recipe") || j["recipe"].is_null()) return {};
    return j["recipe"].dump();
}

void write_track_csv(const CycleTrack& track, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const int m = track.branch_count();
    out << "theta";
    for (int j = 0; j < m; ++j) out << ",re_" << j << ",im_" << j;
    out << "\n";
    for (long s = 0; s <= track.grid_size; ++s) {
        out << format_double(static_cast<double>(s) / static_cast<double>(track.grid_size));
        for (int j = 0; j < m; ++j) {
            const cplx& z = track.points[s][j];
            out << "," << format_double(z.real()) << "," << format_double(z.imag());
        }
        out << "\n";
    }
}

void write_track_sidecar(const CycleTrack& track, const std::string& path) {
    json j;
    j["schema"] = 1;
    j["k"] = track.period;
    j["branches"] = track.branch_count();
    j["N"] = track.grid_size;
    j["monodromy"] = track.monodromy;
    j["max_newton_residual"] = track.max_newton_residual;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

std::string multiplier_report_json(const MultiplierReport& report) {
    json j;
    j["schema"] = 1;
    j["kappa"] = report.kappa;
    j["log_integral"] = report.log_integral;
    j["grid_N"] = report.grid_size;
    j["singular_angles"] = report.singular_angles;
    j["super_attracting"] = report.super_attracting;
    j["classification"] = curve_class_name(classify(report));
    return j.dump(2);
}

std::string tube_estimate_json(const TubeEstimate& tube) {
    json j;
    j["schema"] = 1;
    j["radius"] = tube.radius;
    j["verified_samples"] = tube.verified_samples;
    j["iterate_budget"] = tube.iterate_budget;
    return j.dump(2);
}

}  // namespace fpd
