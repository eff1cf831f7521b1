#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace halflin::detail {

// Dormand-Prince 5(4) embedded pair with PI step-size control, state kept in
// extended precision. Extended range matters: the quasi-derivative w = v*Phi(x')
// carries the coefficient's magnitude, which spans thousands of e-folds on
// exponential-volume profiles over long horizons.

template <std::size_t N>
using State = std::array<long double, N>;

struct RkControl {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 1e-4;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 8'000'000;
};

enum class RkStatus { done, stopped, step_underflow, nonfinite, max_steps_exceeded };

template <std::size_t N>
struct RkOutcome {
    RkStatus status = RkStatus::done;
    double t = 0.0;
    State<N> y{};
    long accepted = 0;
    long rejected = 0;
};

template <std::size_t N>
struct HookAction {
    bool stop = false;
    bool rescaled = false;
    State<N> scale{};  // componentwise factors applied to y (and the FSAL stage)
};

template <std::size_t N, class F>
inline bool rk45_step(const F& f, double t, double h, const State<N>& y, const State<N>& k1,
                      State<N>& y5, State<N>& err, State<N>& k7) {
    constexpr long double a21 = 1.0L / 5.0L;
    constexpr long double a31 = 3.0L / 40.0L, a32 = 9.0L / 40.0L;
    constexpr long double a41 = 44.0L / 45.0L, a42 = -56.0L / 15.0L, a43 = 32.0L / 9.0L;
    constexpr long double a51 = 19372.0L / 6561.0L, a52 = -25360.0L / 2187.0L,
                          a53 = 64448.0L / 6561.0L, a54 = -212.0L / 729.0L;
    constexpr long double a61 = 9017.0L / 3168.0L, a62 = -355.0L / 33.0L,
                          a63 = 46732.0L / 5247.0L, a64 = 49.0L / 176.0L,
                          a65 = -5103.0L / 18656.0L;
    constexpr long double b1 = 35.0L / 384.0L, b3 = 500.0L / 1113.0L, b4 = 125.0L / 192.0L,
                          b5 = -2187.0L / 6784.0L, b6 = 11.0L / 84.0L;
    constexpr long double e1 = 71.0L / 57600.0L, e3 = -71.0L / 16695.0L, e4 = 71.0L / 1920.0L,
                          e5 = -17253.0L / 339200.0L, e6 = 22.0L / 525.0L, e7 = -1.0L / 40.0L;
    constexpr long double c2 = 1.0L / 5.0L, c3 = 3.0L / 10.0L, c4 = 4.0L / 5.0L, c5 = 8.0L / 9.0L;

    const long double hl = h;
    State<N> tmp, k2, k3, k4, k5, k6;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hl * a21 * k1[i];
    k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hl * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + hl * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + hl * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + hl * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + hl * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + h, y5);

    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
        err[i] = hl * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        if (!std::isfinite(y5[i]) || !std::isfinite(err[i])) finite = false;
    }
    return finite;
}

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0). The hook runs after each
/// accepted step; it may stop the run or rescale the state (the FSAL stage is
/// rescaled with it, valid because the right-hand sides used here are
/// componentwise homogeneous under those rescalings).
template <std::size_t N, class F, class Hook>
RkOutcome<N> rk45(const F& f, double t0, double t1, State<N> y0, const RkControl& ctl,
                  Hook&& hook) {
    RkOutcome<N> out;
    out.t = t0;
    out.y = y0;
    if (!(t1 > t0)) return out;

    const double safe = 0.9;
    const double beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;

    double h = std::min({ctl.h_init, ctl.h_max, t1 - t0});
    State<N> k1 = f(t0, out.y);
    State<N> y5, err, k7;
    int consecutive_bad = 0;

    while (out.t < t1) {
        if (out.accepted + out.rejected >= ctl.max_steps) {
            out.status = RkStatus::max_steps_exceeded;
            return out;
        }
        const bool last = out.t + h >= t1;
        if (last) h = t1 - out.t;
        if (!(h > std::fabs(out.t) * 1e-15 + 1e-300)) {
            out.status = RkStatus::step_underflow;
            return out;
        }

        const bool finite = rk45_step<N>(f, out.t, h, out.y, k1, y5, err, k7);
        double errnorm = 0.0;
        if (finite) {
            for (std::size_t i = 0; i < N; ++i) {
                const long double sc =
                    ctl.atol + ctl.rtol * std::max(fabsl(out.y[i]), fabsl(y5[i]));
                const double r = static_cast<double>(err[i] / sc);
                errnorm += r * r;
            }
            errnorm = std::sqrt(errnorm / N);
        } else {
            errnorm = 10.0;  // force rejection
            if (++consecutive_bad > 60) {
                out.status = RkStatus::nonfinite;
                return out;
            }
        }

        if (errnorm <= 1.0) {
            consecutive_bad = 0;
            out.t = last ? t1 : out.t + h;
            out.y = y5;
            k1 = k7;
            ++out.accepted;

            const HookAction<N> act = hook(out.t, out.y);
            if (act.rescaled) {
                for (std::size_t i = 0; i < N; ++i) {
                    out.y[i] *= act.scale[i];
                    k1[i] *= act.scale[i];
                }
            }
            if (act.stop) {
                out.status = RkStatus::stopped;
                return out;
            }

            const double fac11 = std::pow(std::max(errnorm, 1e-30), expo1);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(0.1, std::min(5.0, fac / safe));
            h = std::min(h / fac, ctl.h_max);
            facold = std::max(errnorm, 1e-4);
        } else {
            ++out.rejected;
            const double fac11 = std::pow(errnorm, expo1);
            h = finite ? h / std::min(5.0, fac11 / safe) : h * 0.25;
        }
    }
    out.status = RkStatus::done;
    return out;
}

template <std::size_t N, class F>
RkOutcome<N> rk45_to(const F& f, double t0, double t1, State<N> y0, const RkControl& ctl) {
    return rk45<N>(f, t0, t1, y0, ctl, [](double, const State<N>&) { return HookAction<N>{}; });
}

}  // namespace halflin::detail
