#pragma once

#include <cmath>

#include "halflin/errors.hpp"

namespace halflin {

/// Conjugate exponent q = p / (p - 1); rejects p <= 1 and non-finite p.
double conjugate_exponent(double p);

/// The odd power nonlinearity Phi(s) = |s|^{p-2} s. Phi(0) = 0 exactly.
double phi(double s, double p);

/// Inverse of phi: |s|^{q-2} s with q conjugate to p.
double phi_inverse(double s, double p);

/// Extended-precision |s|^{e} * sign(s); the building block of phi and its
/// inverse (e is the exponent of |s|, i.e. p - 1 for phi).
long double signed_pow_l(long double s, long double e);

/// Generalized pi: 2*pi / (p * sin(pi/p)), the first-zero distance of the
/// constant-coefficient half-linear equation normalized with lambda = p - 1.
double generalized_pi(double p);

/// Zero spacing of (Phi(x'))' + lambda*Phi(x) = 0:
/// ((p-1)/lambda)^{1/p} * generalized_pi(p).
double constant_coefficient_zero_spacing(double p, double lambda);

/// Exponent bookkeeping shared by every module: p > 1, its conjugate q,
/// and the spectral parameter lambda.
class HalfLinearParams {
public:
    static HalfLinearParams make(double p, double lambda);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double lambda() const noexcept { return lambda_; }

private:
    HalfLinearParams(double p, double q, double lambda) : p_(p), q_(q), lambda_(lambda) {}
    double p_;
    double q_;
    double lambda_;
};

}  // namespace halflin
