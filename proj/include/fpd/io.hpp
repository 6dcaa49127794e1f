#pragma once

#include "fpd/continuation.hpp"
#include "fpd/constructions.hpp"

#include <string>
#include <vector>

namespace fpd {

struct RenderWindow {
    cplx center{0.0, 0.0};
    double width = 4.0;  // extent along the real axis; pixels are square
    int px_w = 256;
    int px_h = 256;

    cplx pixel_point(int px, int py) const {
        double step = width / px_w;
        return center + cplx((px + 0.5 - px_w / 2.0) * step,
                             (px_h / 2.0 - py - 0.5) * step);
    }
};

// Row-major 8-bit RGB raster, top row = max imaginary part.
struct RasterImage {
    int w = 0, h = 0;
    std::vector<unsigned char> rgb;  // 3 bytes per pixel

    void set(int px, int py, unsigned char r, unsigned char g, unsigned char b) {
        auto* p = &rgb[3 * (static_cast<size_t>(py) * w + px)];
        p[0] = r; p[1] = g; p[2] = b;
    }
};

enum class SliceMode { Julia, Basin, Tube };
enum class ParamKind { MandelbrotC, Lambda };

// Escape step per pixel (-1 when bounded). The base angle advances each
// iteration unless static_base is set. OpenMP sweep plus serial reference.
std::vector<int> escape_counts(const FibredMap& map, double theta, const RenderWindow& win,
                               int max_iter, double escape_radius, bool static_base);
std::vector<int> escape_counts_serial(const FibredMap& map, double theta, const RenderWindow& win,
                                      int max_iter, double escape_radius, bool static_base);

struct SliceScene {
    const FibredMap* map = nullptr;
    double theta = 0.0;
    SliceMode mode = SliceMode::Julia;
    RenderWindow window;
    int max_iter = 256;
    double escape_radius = 4.0;
    bool static_base = false;
    // basin/tube modes
    const MultiCurve* curve = nullptr;
    const TubeEstimate* tube = nullptr;
    double delta = 1e-3;
};

RasterImage render_fiber_slice(const SliceScene& scene);
RasterImage render_parameter_space(ParamKind kind, const RenderWindow& win, int max_iter,
                                   double escape_radius = 4.0);

void write_ppm(const RasterImage& img, const std::string& path);

// 17-significant-digit decimal, round-trip exact.
std::string format_double(double x);

// Curve exchange: CSV `theta,re_0,im_0,...` of unfolding samples plus a JSON
// sidecar {n, p, N, base_points, recipe}.
void write_curve_csv(const MultiCurve& curve, const std::string& path);
void write_curve_sidecar(const MultiCurve& curve, const std::string& path,
                         const std::string& recipe_json);
MultiCurve read_curve(const std::string& csv_path, const std::string& sidecar_path);
std::string read_sidecar_recipe(const std::string& sidecar_path);

void write_track_csv(const CycleTrack& track, const std::string& path);
void write_track_sidecar(const CycleTrack& track, const std::string& path);

std::string multiplier_report_json(const MultiplierReport& report);
std::string tube_estimate_json(const TubeEstimate& tube);

}  // namespace fpd
