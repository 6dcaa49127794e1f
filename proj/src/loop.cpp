#include "fpd/loop.hpp"

#include "fpd/angle.hpp"

#include <algorithm>
#include <stdexcept>

namespace fpd {

namespace {

bool power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

CoefficientLoop::CoefficientLoop() = default;

CoefficientLoop CoefficientLoop::circle(cplx center, double radius) {
    CoefficientLoop loop;
    loop.kind_ = Kind::Circle;
    loop.center_ = center;
    loop.radius_ = radius;
    return loop;
}

CoefficientLoop CoefficientLoop::parabolic2(double eps, double x0) {
    if (!(eps > 0.0)) throw std::invalid_argument("parabolic2 loop: eps must be positive");
    if (!(x0 >= 0.0 && x0 < 0.25))
        throw std::invalid_argument("parabolic2 loop: need 0 <= x0 < 1/4");
    if (!(eps * eps / (0.25 - eps * eps * x0) < 1.0))
        throw std::invalid_argument("parabolic2 loop: eps^2/(1/4 - eps^2 x0) must be < 1");
    CoefficientLoop loop;
    loop.kind_ = Kind::Parabolic2;
    loop.eps_ = eps;
    loop.x0_ = x0;
    return loop;
}

CoefficientLoop CoefficientLoop::sampled(std::vector<cplx> values) {
    if (values.size() < 8) throw std::invalid_argument("sampled loop: need at least 8 nodes");
    if (!power_of_two(values.size()))
        throw std::invalid_argument("sampled loop: grid size must be a power of two");
    CoefficientLoop loop;
    loop.kind_ = Kind::Sampled;
    loop.samples_ = std::move(values);
    return loop;
}

cplx CoefficientLoop::operator()(double theta) const noexcept {
    switch (kind_) {
        case Kind::Circle:
            return center_ + radius_ * unit_circle(theta);
        case Kind::Parabolic2:
            return cplx(0.25 - eps_ * eps_ * x0_) - eps_ * eps_ * unit_circle(theta);
        case Kind::Sampled: {
            const size_t n = samples_.size();
            double pos = Angle::wrap(theta) * static_cast<double>(n);
            size_t i = static_cast<size_t>(pos);
            if (i >= n) i = 0;
            double f = pos - static_cast<double>(i);
            if (f == 0.0) return samples_[i];
            size_t j = i + 1 == n ? 0 : i + 1;
            return samples_[i] * (1.0 - f) + samples_[j] * f;
        }
    }
    return {};
}

double CoefficientLoop::sup_abs() const {
    switch (kind_) {
        case Kind::Circle:
            return std::abs(center_) + std::abs(radius_);
        case Kind::Parabolic2:
            return std::abs(0.25 - eps_ * eps_ * x0_) + eps_ * eps_;
        case Kind::Sampled: {
            double m = 0.0;
            for (const cplx& v : samples_) m = std::max(m, std::abs(v));
            return m;
        }
    }
    return 0.0;
}

}  // namespace fpd
