#pragma once

#include <vector>

#include "halflin/errors.hpp"

namespace halflin {

/// Shape-preserving monotone cubic interpolation (Fritsch-Carlson slopes).
/// The interpolant never overshoots the data on any knot interval, so
/// positive samples give a positive interpolant.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // knot slopes
};

}  // namespace halflin
