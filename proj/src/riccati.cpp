#include "halflin/riccati.hpp"

#include <algorithm>
#include <cmath>

#include "halflin/quadrature.hpp"
#include "halflin/rk45.hpp"
#include "halflin/util.hpp"

namespace halflin {

namespace {

using detail::HookAction;
using detail::RkControl;
using detail::RkOutcome;
using detail::RkStatus;
using State1 = detail::State<1>;

constexpr double kEscape = 1e12;

struct RiccatiRhs {
    const VolumeProfile* profile;
    double lambda;
    double p;
    double q;

    State1 operator()(double t, const State1& y) const {
        const double lv = profile->log_value(t);
        const double ay = std::fabs(static_cast<double>(y[0]));
        double forcing = 0.0;
        if (ay > 0.0) {
            const double e = (1.0 - q) * lv + q * std::log(ay);
            forcing = (p - 1.0) * std::exp(e);
        }
        State1 d;
        d[0] = lambda * std::exp(lv) + forcing;
        return d;
    }
};

RkControl riccati_control(const IntegrateOptions& opt, double span_length) {
    RkControl c;
    c.rtol = opt.rtol;
    c.atol = opt.atol;
    c.h_init = opt.init_step;
    c.h_max = std::max(opt.max_step_fraction * span_length, 16.0 * opt.init_step);
    c.max_steps = opt.max_steps;
    return c;
}

// Time at which |y| crosses M inside (samples[k].t, samples[k+1].t], found by
// bisection on re-integration from sample k.
double refine_crossing(const RiccatiRhs& rhs, const RiccatiTrajectory& rt,
                       const IntegrateOptions& opt, std::size_t k, double M) {
    const double t_a = rt.samples[k].t;
    double lo = t_a;
    double hi = rt.samples[k + 1].t;
    RkControl ctl = riccati_control(opt, hi - lo + 1e-30);
    State1 y0{static_cast<long double>(rt.samples[k].y)};
    while (hi - lo > 1e-12 * std::max(1.0, std::fabs(hi))) {
        const double mid = 0.5 * (lo + hi);
        ctl.h_init = std::min(opt.init_step, std::max((mid - t_a) / 8.0, 1e-15));
        const RkOutcome<1> out = detail::rk45_to<1>(rhs, t_a, mid, y0, ctl);
        if (out.status != RkStatus::done) break;
        if (fabsl(out.y[0]) >= M) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(RiccatiOrigin o) {
    return o == RiccatiOrigin::direct_integration ? "direct_integration"
                                                  : "substitution_from_solution";
}

std::string to_string(CaseClass c) {
    switch (c) {
        case CaseClass::case_I: return "case_I";
        case CaseClass::case_II: return "case_II";
        case CaseClass::inconclusive: return "inconclusive";
    }
    return "?";
}

RiccatiTrajectory integrate_riccati(const HalfLinearParams& params, const VolumeProfile& profile,
                                    double y0, std::pair<double, double> span,
                                    const IntegrateOptions& options) {
    const auto [t0, t1] = span;
    if (!(t1 > t0)) throw ParameterError("integration span must have t_end > t_start");
    if (t0 < profile.t0() - 1e-12 || t1 > profile.domain_end() + 1e-12) {
        throw DomainError("span outside the profile domain");
    }
    if (!std::isfinite(y0)) throw DomainError("y0 must be finite");

    RiccatiTrajectory rt(params, profile, RiccatiOrigin::direct_integration);
    const RiccatiRhs rhs{&profile, params.lambda(), params.p(), params.q()};

    rt.samples.push_back({t0, y0});
    bool escaped = false;
    auto hook = [&](double t, const State1& y) {
        rt.samples.push_back({t, static_cast<double>(y[0])});
        HookAction<1> act;
        if (fabsl(y[0]) >= static_cast<long double>(kEscape)) {
            escaped = true;
            act.stop = true;
        }
        return act;
    };

    const RkOutcome<1> out = detail::rk45<1>(
        rhs, t0, t1, State1{static_cast<long double>(y0)}, riccati_control(options, t1 - t0), hook);

    // For q > 2 the escape threshold can be unreachable: y ~ (t*-t)^{-1/(q-1)}
    // puts |y| = 1e12 within less than a double ulp of the blow-up time, so
    // the stepper underflows first. A step underflow with |y| large and the
    // superlinear term dominating IS the blow-up, resolved as far as double
    // time resolution allows.
    const double y_stop = static_cast<double>(out.y[0]);
    bool underflow_blow_up = false;
    if (out.status == RkStatus::step_underflow && std::fabs(y_stop) >= 1e3) {
        const double lv = profile.log_value(out.t);
        const double forcing = (params.p() - 1.0) *
                               std::exp((1.0 - params.q()) * lv +
                                        params.q() * std::log(std::fabs(y_stop)));
        underflow_blow_up = forcing >= std::fabs(params.lambda()) * std::exp(lv);
    }
    if (out.status == RkStatus::step_underflow && !underflow_blow_up) {
        throw IntegrationError("step size underflow at t = " + fmt_double(out.t), out.t);
    }
    if (out.status == RkStatus::nonfinite) {
        throw OverflowError("non-finite Riccati state at t = " + fmt_double(out.t), out.t);
    }
    if (out.status == RkStatus::max_steps_exceeded) {
        throw IntegrationError("step budget exhausted at t = " + fmt_double(out.t), out.t);
    }

    if (escaped || underflow_blow_up) {
        if (underflow_blow_up) rt.samples.push_back({out.t, y_stop});
        // crossing times of three decade thresholds ending at the highest
        // reached magnitude, then the blow-up time by Richardson-style
        // extrapolation: t* - t_M ~ M^{1-q}
        BlowUp b;
        const double peak = std::min(std::fabs(rt.samples.back().y), kEscape);
        const double top = std::pow(10.0, std::floor(std::log10(peak)));
        for (double M : {top / 100.0, top / 10.0, top}) {
            for (std::size_t k = 0; k + 1 < rt.samples.size(); ++k) {
                if (std::fabs(rt.samples[k].y) < M && std::fabs(rt.samples[k + 1].y) >= M) {
                    b.threshold_sequence.push_back(refine_crossing(rhs, rt, options, k, M));
                    break;
                }
            }
        }
        if (b.threshold_sequence.size() >= 2) {
            const double t11 = b.threshold_sequence[b.threshold_sequence.size() - 2];
            const double t12 = b.threshold_sequence.back();
            const double ratio = std::pow(10.0, params.q() - 1.0) - 1.0;
            b.time = t12 + (t12 - t11) / ratio;
        } else if (!b.threshold_sequence.empty()) {
            b.time = b.threshold_sequence.back();
        } else {
            b.time = out.t;
        }
        // end the sample list at the last refined threshold crossing
        if (!b.threshold_sequence.empty()) {
            const double t_cross = b.threshold_sequence.back();
            const double y_sign = rt.samples.back().y >= 0.0 ? 1.0 : -1.0;
            while (!rt.samples.empty() && rt.samples.back().t > t_cross) rt.samples.pop_back();
            rt.samples.push_back({t_cross, y_sign * top});
        }
        rt.blow_up = b;
    }
    return rt;
}

RiccatiTrajectory riccati_from_solution(const Trajectory& traj, double t_lo, double t_hi,
                                        std::size_t resample_nodes) {
    if (!(t_hi > t_lo)) throw UsageError("substitution window must have t_hi > t_lo");
    if (t_lo < traj.t_start - 1e-9 || t_hi > traj.t_end + 1e-9) {
        throw UsageError("substitution window outside the trajectory span");
    }

    // collect the stored samples inside the window in a common scale
    std::vector<TrajectorySample> window;
    double kappa0 = 0.0;
    bool first = true;
    for (const auto& s : traj.samples) {
        if (s.t < t_lo - 1e-12 || s.t > t_hi + 1e-12) continue;
        if (first) {
            kappa0 = s.log_scale;
            first = false;
        }
        TrajectorySample c = s;
        const long double adj = expl(static_cast<long double>(s.log_scale - kappa0));
        const long double wadj = expl(
            static_cast<long double>((traj.params.p() - 1.0) * (s.log_scale - kappa0)));
        c.x *= adj;
        c.w *= wadj;
        c.log_scale = kappa0;
        window.push_back(c);
    }
    if (window.size() < 2) throw UsageError("substitution window contains too few samples");

    long double max_x = 0.0L;
    for (const auto& s : window) max_x = std::max(max_x, fabsl(s.x));
    int sign0 = 0;
    for (const auto& s : window) {
        if (fabsl(s.x) < 1e-12L * max_x) {
            throw DomainError(
                "x vanishes inside the substitution window; clip the window strictly "
                "between consecutive zeros");
        }
        if (sign0 == 0) sign0 = sgn(s.x);
        if (sgn(s.x) != sign0) {
            throw DomainError(
                "x changes sign inside the substitution window; clip the window strictly "
                "between consecutive zeros");
        }
    }

    const std::vector<TrajectorySample> nodes =
        resample_nodes == 0 ? window : resample_trajectory(traj, t_lo, t_hi, resample_nodes);

    RiccatiTrajectory rt(traj.params, traj.profile, RiccatiOrigin::substitution_from_solution);
    const long double pm1 = traj.params.p() - 1.0L;
    rt.samples.reserve(nodes.size());
    for (const auto& s : nodes) {
        const long double y = -s.w / signed_pow_l(s.x, pm1);
        rt.samples.push_back({s.t, static_cast<double>(y)});
    }
    return rt;
}

double riccati_residual(const RiccatiTrajectory& rt, const VolumeProfile& profile,
                        const HalfLinearParams& params) {
    const std::size_t n = rt.samples.size();
    if (n < 10) throw ParameterError("riccati_residual needs >= 10 samples");
    const RiccatiRhs rhs{&profile, params.lambda(), params.p(), params.q()};

    bool uniform = true;
    const double h0 = rt.samples[1].t - rt.samples[0].t;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::fabs(rt.samples[i + 1].t - rt.samples[i].t - h0) > 1e-9 * h0) {
            uniform = false;
            break;
        }
    }

    double worst = 0.0;
    auto check = [&](std::size_t i, double dy) {
        const double f = static_cast<double>(
            rhs(rt.samples[i].t, State1{static_cast<long double>(rt.samples[i].y)})[0]);
        worst = std::max(worst, std::fabs(dy - f) / (1.0 + std::fabs(dy)));
    };
    if (uniform) {
        // fourth-order centered difference over full-stencil interior points
        for (std::size_t i = 2; i + 2 < n; ++i) {
            const double dy = (rt.samples[i - 2].y - 8.0 * rt.samples[i - 1].y +
                               8.0 * rt.samples[i + 1].y - rt.samples[i + 2].y) /
                              (12.0 * h0);
            check(i, dy);
        }
    } else {
        // three-point derivative on a nonuniform grid
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hm = rt.samples[i].t - rt.samples[i - 1].t;
            const double hp = rt.samples[i + 1].t - rt.samples[i].t;
            const double dy = rt.samples[i - 1].y * (-hp / (hm * (hm + hp))) +
                              rt.samples[i].y * ((hp - hm) / (hm * hp)) +
                              rt.samples[i + 1].y * (hm / (hp * (hm + hp)));
            check(i, dy);
        }
    }
    return worst;
}

CaseClass case_classification(const VolumeProfile& profile, double p, double horizon) {
    const double q = conjugate_exponent(p);

    // analytic classifications for kinds with closed forms
    switch (profile.kind()) {
        case ProfileKind::constant:
            return CaseClass::case_II;
        case ProfileKind::power:
            return profile.rate() * (q - 1.0) > 1.0 ? CaseClass::case_I : CaseClass::case_II;
        case ProfileKind::exponential:
            return profile.rate() > 0.0 ? CaseClass::case_I : CaseClass::case_II;
        case ProfileKind::model_manifold:
            if (profile.curvature() < 0.0) return CaseClass::case_I;
            return (profile.dimension() - 1) * (q - 1.0) > 1.0 ? CaseClass::case_I
                                                               : CaseClass::case_II;
        case ProfileKind::tabulated:
            break;
    }

    // numeric classification: compare increments of int v^{1-q} across
    // doubling windows of the horizon
    double t_hi = horizon;
    if (std::isfinite(profile.domain_end())) t_hi = std::min(t_hi, profile.domain_end());
    const double t_lo = profile.t0() + 0.01 * (t_hi - profile.t0());
    if (!(t_hi > t_lo + 2.0)) {
        throw ParameterError("case_classification horizon too short");
    }
    auto integrand = [&](double s) { return std::exp((1.0 - q) * profile.log_value(s)); };
    const double h8 = (t_hi - t_lo) / 8.0;
    const double marks[4] = {t_lo + h8, t_lo + 2 * h8, t_lo + 4 * h8, t_hi};
    double increments[3];
    for (int i = 0; i < 3; ++i) {
        increments[i] = quad::integrate(integrand, marks[i], marks[i + 1]);
    }
    const bool decaying =
        increments[1] < 0.5 * increments[0] && increments[2] < 0.5 * increments[1];
    const bool nondecreasing = increments[1] >= increments[0] * (1.0 - 1e-6) &&
                               increments[2] >= increments[1] * (1.0 - 1e-6);
    if (decaying) return CaseClass::case_I;
    if (nondecreasing) return CaseClass::case_II;
    return CaseClass::inconclusive;
}

GrowthBoundReport growth_bound_check(const RiccatiTrajectory& rt, const HalfLinearParams& params,
                                     double T) {
    if (!(params.lambda() > 0.0)) throw ParameterError("growth_bound_check needs lambda > 0");
    std::size_t i0 = rt.samples.size();
    for (std::size_t i = 0; i < rt.samples.size(); ++i) {
        if (rt.samples[i].t >= T - 1e-12) {
            i0 = i;
            break;
        }
    }
    if (i0 >= rt.samples.size()) throw ParameterError("T beyond the trajectory span");
    if (!(rt.samples[i0].y > 0.0)) {
        throw ParameterError("growth_bound_check precondition y(T) > 0 fails: y(" +
                             fmt_double(rt.samples[i0].t) + ") = " + fmt_double(rt.samples[i0].y));
    }

    GrowthBoundReport rep;
    rep.T_used = rt.samples[i0].t;
    rep.y_at_T = rt.samples[i0].y;
    const double rate = params.p() * std::pow(params.lambda(), 1.0 / params.p());
    const double lam = params.lambda();
    const double p = params.p();
    const double q = params.q();
    rep.worst_growth_margin = std::numeric_limits<double>::infinity();
    rep.worst_young_margin = std::numeric_limits<double>::infinity();

    for (std::size_t i = i0; i < rt.samples.size(); ++i) {
        const double t = rt.samples[i].t;
        const double y = rt.samples[i].y;
        ++rep.samples_checked;

        const double expo = rate * (t - rep.T_used);
        const double bound = expo > 700.0 ? std::numeric_limits<double>::infinity()
                                          : rep.y_at_T * std::exp(expo);
        const double slack = 1e-8 * std::fabs(y);
        const double gm = (y - bound) / std::max(1.0, std::fabs(bound));
        rep.worst_growth_margin = std::min(rep.worst_growth_margin, gm);
        bool violated = !(y >= bound - slack);

        const double lv = rt.profile.log_value(t);
        const double forcing =
            y == 0.0 ? 0.0 : (p - 1.0) * std::exp((1.0 - q) * lv + q * std::log(std::fabs(y)));
        const double rhs = lam * std::exp(lv) + forcing;
        const double lhs = rate * y;
        const double ym = (rhs - lhs) / std::max(1.0, rhs);
        rep.worst_young_margin = std::min(rep.worst_young_margin, ym);
        if (!(lhs <= rhs * (1.0 + 1e-12) + 1e-300)) {
            rep.young_holds = false;
            violated = true;
        }
        if (!(y >= bound - slack)) rep.growth_holds = false;
        if (violated && !rep.first_violation_t) rep.first_violation_t = t;
    }
    return rep;
}

void write_riccati_csv(std::ostream& os, const RiccatiTrajectory& rt) {
    os << "t,y\n";
    for (const auto& s : rt.samples) {
        os << fmt_double(s.t) << ',' << fmt_double(s.y) << '\n';
    }
}

nlohmann::ordered_json blow_up_to_json(const BlowUp& b) {
    nlohmann::ordered_json j;
    j["time"] = b.time;
    j["threshold_sequence"] = b.threshold_sequence;
    return j;
}

}  // namespace halflin
