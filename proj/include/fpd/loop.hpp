#pragma once

#include "fpd/complex_types.hpp"

#include <vector>

namespace fpd {

// Continuous coefficient loop C : T^1 -> C feeding the fiber family.
//
// circle      C(t) = center + radius e^{2 pi i t}        (radius real, sign allowed)
// parabolic2  C(t) = 1/4 - eps^2 x0 - eps^2 e^{2 pi i t} (small loop around 1/4)
// sampled     linear interpolation between uniform grid nodes, closed over T^1
class CoefficientLoop {
public:
    enum class Kind { Circle, Parabolic2, Sampled };

    CoefficientLoop();  // constant 0 loop (circle of radius 0)

    static CoefficientLoop circle(cplx center, double radius);
    static CoefficientLoop parabolic2(double eps, double x0);
    static CoefficientLoop sampled(std::vector<cplx> values);

    Kind kind() const { return kind_; }
    cplx operator()(double theta) const noexcept;

    // sup |C| over the circle (used for escape-radius choices)
    double sup_abs() const;

    cplx center() const { return center_; }
    double radius() const { return radius_; }
    double eps() const { return eps_; }
    double x0() const { return x0_; }
    const std::vector<cplx>& samples() const { return samples_; }

private:
    Kind kind_ = Kind::Circle;
    cplx center_{0.0, 0.0};
    double radius_ = 0.0;
    double eps_ = 0.0;
    double x0_ = 0.0;
    std::vector<cplx> samples_;
};

inline cplx loop_value(const CoefficientLoop& loop, double theta) { return loop(theta); }

}  // namespace fpd
