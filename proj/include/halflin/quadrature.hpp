#pragma once

#include <cmath>
#include <limits>

#include "halflin/errors.hpp"

namespace halflin::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 60;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    long evaluations = 0;
};

namespace detail {

inline double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

template <class F>
double recurse(const F& f, double a, double m, double b, double fa, double fm, double fb,
               double whole, double abs_tol, double rel_tol, int depth, Result& out) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    out.evaluations += 2;
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = (left + right - whole) / 15.0;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(left + right));
    if (std::fabs(err) <= tol || depth <= 0) {
        if (depth <= 0 && std::fabs(err) > tol) out.converged = false;
        out.error_estimate += std::fabs(err);
        return left + right + err;
    }
    return recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_tol, rel_tol, depth - 1, out) +
           recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_tol, rel_tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson with recursive interval halving.
template <class F>
Result adaptive_simpson(const F& f, double a, double b, Options opt = {}) {
    Result out;
    if (a == b) return out;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    out.evaluations = 3;
    const double whole = detail::simpson(fa, fm, fb, b - a);
    out.value = detail::recurse(f, a, m, b, fa, fm, fb, whole, opt.abs_tol, opt.rel_tol,
                                opt.max_depth, out);
    return out;
}

/// Adaptive Simpson that throws QuadratureError when the refinement budget
/// is exhausted, carrying the achieved error estimate.
template <class F>
double integrate(const F& f, double a, double b, Options opt = {}) {
    const Result r = adaptive_simpson(f, a, b, opt);
    if (!r.converged) {
        throw QuadratureError("quadrature did not converge on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]; achieved error estimate " +
                                  std::to_string(r.error_estimate),
                              r.value, r.error_estimate);
    }
    return r.value;
}

struct TailResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    double truncated_at = 0.0;
};

/// Improper integral over [a, inf) by doubling segments with automatic tail
/// truncation: stops when the extrapolated tail is below tail_rel of the
/// total. Throws DomainError when the segments do not decay (divergence).
template <class F>
TailResult integrate_to_infinity(const F& f, double a, Options opt = {}, double tail_rel = 1e-8) {
    TailResult out;
    double lo = a;
    double width = 1.0;
    double prev_seg = std::numeric_limits<double>::infinity();
    int non_decreasing = 0;
    int consecutive_tiny = 0;
    for (int k = 0; k < 80; ++k) {
        const double hi = lo + width;
        const double seg = integrate(f, lo, hi, opt);
        out.value += seg;
        out.truncated_at = hi;

        const double floor = std::max(opt.abs_tol, tail_rel * std::fabs(out.value));
        if (std::fabs(seg) <= floor) {
            out.tail_estimate = std::fabs(seg);
            if (++consecutive_tiny >= 2) return out;
        } else {
            consecutive_tiny = 0;
            // mean magnitude per unit length; must eventually decay
            const double seg_rate = std::fabs(seg) / width;
            const double prev_rate = std::fabs(prev_seg) / (width / 2.0);
            if (k > 0 && std::isfinite(prev_rate) && seg_rate >= prev_rate * 0.999) {
                if (++non_decreasing >= 6) {
                    throw DomainError("improper integral appears divergent (segments not decaying)");
                }
            } else {
                non_decreasing = 0;
            }
            if (k > 0 && std::fabs(seg) < std::fabs(prev_seg)) {
                const double r =
                    std::min(std::fabs(seg) / std::max(std::fabs(prev_seg), 1e-300), 0.9);
                out.tail_estimate = std::fabs(seg) * r / (1.0 - r);
                if (out.tail_estimate <= tail_rel * std::max(std::fabs(out.value), 1e-300) &&
                    std::fabs(seg) <= tail_rel * std::max(std::fabs(out.value), 1e-300)) {
                    return out;
                }
            }
        }
        prev_seg = seg;
        lo = hi;
        width *= 2.0;
    }
    throw DomainError("improper integral truncation budget exhausted");
}

}  // namespace halflin::quad
