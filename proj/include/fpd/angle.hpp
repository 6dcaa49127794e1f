#pragma once

#include <cmath>

namespace fpd {

// Point of the unit circle T^1 kept in [0,1); every operation reduces mod 1.
class Angle {
public:
    Angle() = default;
    explicit Angle(double turns) : v_(wrap(turns)) {}

    double value() const { return v_; }

    static double wrap(double x) {
        double w = x - std::floor(x);
        return w >= 1.0 ? w - 1.0 : w;  // rounding at the seam
    }

    Angle& operator+=(const Angle& o) {
        v_ = wrap(v_ + o.v_);
        return *this;
    }
    Angle& operator+=(double t) {
        v_ = wrap(v_ + t);
        return *this;
    }
    friend Angle operator+(Angle a, const Angle& b) { return a += b; }
    friend Angle operator+(Angle a, double t) { return a += t; }
    friend Angle operator*(double s, const Angle& a) { return Angle(s * a.v_); }
    friend bool operator==(const Angle& a, const Angle& b) { return a.v_ == b.v_; }

private:
    double v_ = 0.0;
};

// Distance along the circle, both arguments in turns.
inline double circle_distance(double a, double b) {
    double d = std::fabs(Angle::wrap(a) - Angle::wrap(b));
    return d <= 0.5 ? d : 1.0 - d;
}

}  // namespace fpd
