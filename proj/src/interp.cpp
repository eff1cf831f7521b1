#include "halflin/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace halflin {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw ParameterError("monotone cubic: need >= 2 samples with matching sizes");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i] < x_[i + 1])) {
            throw ParameterError("monotone cubic: abscissae must be strictly increasing");
        }
    }

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    m_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }

    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (std::fabs(m) > 3.0 * std::fabs(d0)) return 3.0 * d0;
        return m;
    };
    if (n == 2) {
        m_[0] = m_[1] = d[0];
    } else {
        m_[0] = endpoint(h[0], h[1], d[0], d[1]);
        m_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }
}

double MonotoneCubic::operator()(double t) const {
    if (t < x_.front() - 1e-12 || t > x_.back() + 1e-12) {
        throw DomainError("monotone cubic: " + std::to_string(t) + " outside table [" +
                          std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
    }
    t = std::clamp(t, x_.front(), x_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const std::size_t i = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0), x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

}  // namespace halflin
