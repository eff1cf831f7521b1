#include "halflin/core.hpp"

#include <limits>
#include <string>

namespace halflin {

namespace {

// p must stay clear of 1 so that q = p/(p-1) is representable.
constexpr double kPMin = 1.0 + 1e-9;
constexpr double kPMax = 1e6;

void check_exponent(double p) {
    if (!std::isfinite(p) || p <= 1.0) {
        throw DomainError("exponent p must be finite and > 1, got " + std::to_string(p));
    }
}

}  // namespace

double conjugate_exponent(double p) {
    check_exponent(p);
    return p / (p - 1.0);
}

double phi(double s, double p) {
    check_exponent(p);
    if (!std::isfinite(s)) throw DomainError("phi: s must be finite");
    if (s == 0.0) return 0.0;
    // sign(s) * |s|^{p-1}, evaluated through pow to avoid the intermediate
    // |s|^{p-2} which overflows for small |s| and p < 2.
    return std::copysign(std::pow(std::fabs(s), p - 1.0), s);
}

double phi_inverse(double s, double p) {
    const double q = conjugate_exponent(p);
    if (!std::isfinite(s)) throw DomainError("phi_inverse: s must be finite");
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(s), q - 1.0), s);
}

long double signed_pow_l(long double s, long double e) {
    if (s == 0.0L) return 0.0L;
    const long double m = powl(fabsl(s), e);
    return s < 0.0L ? -m : m;
}

double generalized_pi(double p) {
    check_exponent(p);
    const double pi = std::acos(-1.0);
    return 2.0 * pi / (p * std::sin(pi / p));
}

double constant_coefficient_zero_spacing(double p, double lambda) {
    check_exponent(p);
    if (!(lambda > 0.0)) throw DomainError("zero spacing requires lambda > 0");
    return std::pow((p - 1.0) / lambda, 1.0 / p) * generalized_pi(p);
}

HalfLinearParams HalfLinearParams::make(double p, double lambda) {
    if (!std::isfinite(p) || p <= kPMin || p >= kPMax) {
        throw DomainError("p must lie in (" + std::to_string(kPMin) + ", " +
                          std::to_string(kPMax) + "), got " + std::to_string(p));
    }
    if (!std::isfinite(lambda)) {
        throw DomainError("lambda must be finite");
    }
    const double q = conjugate_exponent(p);
    const double defect = std::fabs(1.0 / p + 1.0 / q - 1.0);
    if (defect > 1e-12) {
        throw ParameterError("conjugacy defect " + std::to_string(defect) + " exceeds 1e-12");
    }
    return HalfLinearParams(p, q, lambda);
}

}  // namespace halflin
