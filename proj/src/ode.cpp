#include "halflin/ode.hpp"

#include <algorithm>
#include <cmath>

#include "halflin/rk45.hpp"
#include "halflin/util.hpp"

namespace halflin {

namespace {

using detail::HookAction;
using detail::RkControl;
using detail::RkOutcome;
using detail::RkStatus;
using State2 = detail::State<2>;

struct HalfLinearRhs {
    const VolumeProfile* profile;
    long double lambda;
    long double pm1;  // p - 1
    long double qm1;  // q - 1

    State2 operator()(double t, const State2& y) const {
        const long double v = profile->value_l(t);
        State2 d;
        d[0] = signed_pow_l(y[1] / v, qm1);
        d[1] = -lambda * v * signed_pow_l(y[0], pm1);
        return d;
    }
};

RkControl make_control(const IntegrateOptions& opt, double span_length) {
    RkControl c;
    c.rtol = opt.rtol;
    c.atol = opt.atol;
    c.h_init = opt.init_step;
    c.h_max = std::max(opt.max_step_fraction * span_length, 16.0 * opt.init_step);
    c.max_steps = opt.max_steps;
    return c;
}

// Natural scale of the state: |x| + |x'|. Both components vanish only on the
// trivial solution.
long double state_scale(const HalfLinearRhs& rhs, double t, const State2& y) {
    const long double v = rhs.profile->value_l(t);
    return fabsl(y[0]) + fabsl(signed_pow_l(y[1] / v, rhs.qm1));
}

void check_options(const IntegrateOptions& opt) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0) || !(opt.init_step > 0.0) ||
        !(opt.max_step_fraction > 0.0) || !(opt.zero_tol > 0.0)) {
        throw ParameterError("integrator tolerances must be positive");
    }
}

std::string failure_message(RkStatus status, double t) {
    switch (status) {
        case RkStatus::step_underflow:
            return "step size underflow at t = " + fmt_double(t);
        case RkStatus::nonfinite:
            return "non-finite state at t = " + fmt_double(t);
        case RkStatus::max_steps_exceeded:
            return "step budget exhausted at t = " + fmt_double(t);
        default:
            return "";
    }
}

}  // namespace

void Trajectory::validate() const {
    const long double pm1 = params.p() - 1.0;
    const long double qm1 = params.q() - 1.0;
    long double max_x = 0.0L;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
            throw Error("trajectory sample times not strictly increasing");
        }
        max_x = std::max(max_x, fabsl(samples[i].x));
    }
    (void)pm1;
    for (const auto& s : samples) {
        const long double v = profile.value_l(s.t);
        const long double scale = fabsl(s.x) + fabsl(signed_pow_l(s.w / v, qm1));
        if (!(scale > 1e-13L * (1.0L + max_x))) {
            throw Error("trajectory has a near-double zero at t = " + fmt_double(s.t) +
                        "; nontrivial half-linear solutions cannot vanish to second order");
        }
    }
}

HalfLinearRun run_halflinear(const HalfLinearParams& params, const VolumeProfile& profile,
                             double x0, double xprime0, std::pair<double, double> span,
                             const IntegrateOptions& options) {
    check_options(options);
    const auto [t0, t1] = span;
    if (!(t1 > t0)) throw ParameterError("integration span must have t_end > t_start");
    if (t0 < profile.t0() - 1e-12) {
        throw DomainError("span starts before the profile domain t0 = " +
                          fmt_double(profile.t0()));
    }
    if (t1 > profile.domain_end() + 1e-12) {
        throw DomainError("span extends beyond the profile domain");
    }
    if (x0 == 0.0 && xprime0 == 0.0) {
        throw DomainError("initial condition (0, 0) gives only the trivial solution");
    }
    if (!(profile.log_value(t0) > -700.0)) {
        throw DomainError("v(t_start) vanishes; start strictly inside the domain (t_start > t0)");
    }
    if (profile.log_value(std::min(t1, profile.domain_end())) > 11000.0) {
        throw OverflowError("coefficient magnitude exceeds the extended-precision range "
                            "before the end of the span",
                            t1);
    }

    HalfLinearRhs rhs{&profile, static_cast<long double>(params.lambda()),
                      static_cast<long double>(params.p()) - 1.0L,
                      static_cast<long double>(params.q()) - 1.0L};

    HalfLinearRun run{Trajectory(params, profile, options), std::nullopt, t0};
    Trajectory& traj = run.trajectory;
    traj.t_start = t0;
    traj.t_end = t1;

    State2 y0;
    y0[0] = x0;
    y0[1] = profile.value_l(t0) * signed_pow_l(xprime0, rhs.pm1);
    traj.samples.push_back({t0, y0[0], y0[1], 0.0});

    double kappa = 0.0;
    auto hook = [&](double t, const State2& y) {
        HookAction<2> act;
        long double x = y[0];
        long double w = y[1];
        const long double s = state_scale(rhs, t, y);
        if (s > 0.0L && (s > 1e2L || s < 1e-2L)) {
            act.rescaled = true;
            act.scale[0] = 1.0L / s;
            act.scale[1] = powl(s, -rhs.pm1);
            kappa += static_cast<double>(logl(s));
            x *= act.scale[0];
            w *= act.scale[1];
        }
        traj.samples.push_back({t, x, w, kappa});
        return act;
    };

    const RkOutcome<2> out =
        detail::rk45<2>(rhs, t0, t1, y0, make_control(options, t1 - t0), hook);
    traj.stats.accepted = out.accepted;
    traj.stats.rejected = out.rejected;
    run.reached = out.t;
    traj.t_end = out.t;
    if (out.status != RkStatus::done) {
        run.failure = failure_message(out.status, out.t);
    }
    return run;
}

Trajectory integrate_halflinear(const HalfLinearParams& params, const VolumeProfile& profile,
                                double x0, double xprime0, std::pair<double, double> span,
                                const IntegrateOptions& options) {
    HalfLinearRun run = run_halflinear(params, profile, x0, xprime0, span, options);
    if (run.failure) {
        if (run.failure->find("non-finite") != std::string::npos) {
            throw OverflowError(*run.failure, run.reached);
        }
        throw IntegrationError(*run.failure, run.reached);
    }
    return std::move(run.trajectory);
}

namespace {

// Re-integrates the trajectory's system from the stored sample `from` up to
// time t (in the scale of that sample).
State2 advance_from_sample(const Trajectory& traj, std::size_t from, double t) {
    const HalfLinearRhs rhs{&traj.profile, static_cast<long double>(traj.params.lambda()),
                            static_cast<long double>(traj.params.p()) - 1.0L,
                            static_cast<long double>(traj.params.q()) - 1.0L};
    State2 y{traj.samples[from].x, traj.samples[from].w};
    const double t_from = traj.samples[from].t;
    if (t <= t_from) return y;
    RkControl ctl = make_control(traj.options, traj.t_end - traj.t_start);
    ctl.h_init = std::min(traj.options.init_step, std::max((t - t_from) / 8.0, 1e-14));
    const RkOutcome<2> out = detail::rk45_to<2>(rhs, t_from, t, y, ctl);
    if (out.status != RkStatus::done) {
        throw IntegrationError("local re-integration failed: " + failure_message(out.status, out.t),
                               out.t);
    }
    return out.y;
}

}  // namespace

ZeroScan scan_zeros(const Trajectory& traj) {
    traj.validate();
    ZeroScan scan;
    const auto& s = traj.samples;
    if (s.size() < 2) return scan;

    long double max_x = 0.0L;
    for (const auto& smp : s) max_x = std::max(max_x, fabsl(smp.x));

    const double tol = traj.options.zero_tol;
    auto push_zero = [&](double t) {
        if (scan.zeros.empty() || t - scan.zeros.back() > 2.0 * tol) scan.zeros.push_back(t);
    };

    const long double pm1 = traj.params.p() - 1.0L;
    std::size_t prev = 0;  // last sample with a definite sign
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].x == 0.0L) {
            push_zero(s[i].t);
            prev = i;  // sign resumes from the next nonzero sample
            continue;
        }
        if (s[prev].x == 0.0L) {
            prev = i;
            continue;
        }
        if (sgn(s[i].x) == sgn(s[prev].x)) {
            // tangential dip: tiny |x| with no sign change
            if (i + 1 < s.size() && fabsl(s[i].x) < 1e-13L * (1.0L + max_x) &&
                sgn(s[i + 1].x) == sgn(s[prev].x)) {
                scan.tangential_warnings.push_back(s[i].t);
            }
            prev = i;
            continue;
        }

        // bracketing bisection on a locally re-integrated segment
        double lo = s[prev].t;
        double hi = s[i].t;
        const int sign_lo = sgn(s[prev].x);
        State2 y_at_root{};
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const State2 ym = advance_from_sample(traj, prev, mid);
            if (ym[0] == 0.0L) {
                lo = hi = mid;
                y_at_root = ym;
                break;
            }
            if (sgn(ym[0]) == sign_lo) {
                lo = mid;
            } else {
                hi = mid;
            }
            y_at_root = ym;
        }
        const double root = 0.5 * (lo + hi);

        // simple-zero guard: |w| bounded away from zero near the root,
        // measured against the local quasi-derivative magnitude
        const long double adj = expl(pm1 * (long double)(s[i].log_scale - s[prev].log_scale));
        const long double w_local = std::max(fabsl(s[prev].w), fabsl(s[i].w * adj));
        const State2 yr = advance_from_sample(traj, prev, root);
        (void)y_at_root;
        if (fabsl(yr[1]) > 1e-10L * w_local) {
            push_zero(root);
        } else {
            scan.tangential_warnings.push_back(root);
        }
        prev = i;
    }
    return scan;
}

std::vector<double> find_zeros(const Trajectory& traj) { return scan_zeros(traj).zeros; }

std::string to_string(Verdict v) {
    return v == Verdict::oscillatory_evidence ? "oscillatory_evidence" : "no_zero_found";
}

OscillationRun oscillation_run(const HalfLinearParams& params, const VolumeProfile& profile,
                               double t_start, double horizon, int min_zeros,
                               const IntegrateOptions& options) {
    if (!(horizon > t_start)) throw ParameterError("horizon must exceed t_start");
    if (min_zeros < 2) throw ParameterError("min_zeros must be >= 2");

    HalfLinearRun run = run_halflinear(params, profile, 0.0, 1.0, {t_start, horizon}, options);
    ZeroScan scan = scan_zeros(run.trajectory);

    OscillationReport rep;
    rep.zeros = std::move(scan.zeros);
    rep.tangential_warnings = std::move(scan.tangential_warnings);
    rep.min_zeros_required = min_zeros;
    rep.t_start = t_start;
    rep.horizon = horizon;
    rep.p = params.p();
    rep.lambda = params.lambda();
    rep.profile_desc = profile.describe();
    rep.verdict = (rep.zeros.size() >= static_cast<std::size_t>(min_zeros))
                      ? Verdict::oscillatory_evidence
                      : Verdict::no_zero_found;
    if (run.failure) {
        rep.error_note = run.failure;
        rep.reached_t = run.reached;
    }
    return OscillationRun{std::move(rep), std::move(run.trajectory)};
}

OscillationReport oscillation_evidence(const HalfLinearParams& params,
                                       const VolumeProfile& profile, double t_start,
                                       double horizon, int min_zeros,
                                       const IntegrateOptions& options) {
    return oscillation_run(params, profile, t_start, horizon, min_zeros, options).report;
}

std::vector<TrajectorySample> resample_trajectory(const Trajectory& traj, double t_lo,
                                                  double t_hi, std::size_t nodes) {
    if (nodes < 2) throw ParameterError("resample needs >= 2 nodes");
    if (t_lo < traj.t_start - 1e-9 || t_hi > traj.t_end + 1e-9 || !(t_hi > t_lo)) {
        throw UsageError("resample window outside the trajectory span");
    }
    t_lo = std::max(t_lo, traj.t_start);
    t_hi = std::min(t_hi, traj.t_end);

    // start from the last sample at or before t_lo
    std::size_t k = 0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (traj.samples[i].t <= t_lo + 1e-15) k = i;
        else break;
    }

    const HalfLinearRhs rhs{&traj.profile, static_cast<long double>(traj.params.lambda()),
                            static_cast<long double>(traj.params.p()) - 1.0L,
                            static_cast<long double>(traj.params.q()) - 1.0L};
    RkControl ctl = make_control(traj.options, traj.t_end - traj.t_start);

    std::vector<TrajectorySample> out;
    out.reserve(nodes);
    State2 y{traj.samples[k].x, traj.samples[k].w};
    double t_cur = traj.samples[k].t;
    const double kappa = traj.samples[k].log_scale;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (nodes - 1.0);
        if (t > t_cur) {
            ctl.h_init = std::min(traj.options.init_step, std::max((t - t_cur) / 4.0, 1e-14));
            const RkOutcome<2> res = detail::rk45_to<2>(rhs, t_cur, t, y, ctl);
            if (res.status != RkStatus::done) {
                throw IntegrationError("resampling failed at t = " + fmt_double(res.t), res.t);
            }
            y = res.y;
            t_cur = t;
        }
        out.push_back({t, y[0], y[1], kappa});
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t resample_nodes) {
    os << "t,x,w\n";
    auto emit = [&](const TrajectorySample& s) {
        const long double scale = expl(static_cast<long double>(s.log_scale));
        const long double wscale =
            expl(static_cast<long double>((traj.params.p() - 1.0) * s.log_scale));
        os << fmt_double(s.t) << ',' << fmt_long_double(s.x * scale) << ','
           << fmt_long_double(s.w * wscale) << '\n';
    };
    if (resample_nodes == 0) {
        for (const auto& s : traj.samples) emit(s);
    } else {
        for (const auto& s :
             resample_trajectory(traj, traj.t_start, traj.t_end, resample_nodes)) {
            emit(s);
        }
    }
}

}  // namespace halflin
