#include "halflin/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "halflin/criteria.hpp"
#include "halflin/util.hpp"

namespace halflin {

namespace {

// Simpson over uniformly resampled trajectory values; integrands are smooth
// between zeros, and fixed panels keep results reproducible.
struct PanelIntegrals {
    long double numerator = 0.0L;
    long double denominator = 0.0L;
};

PanelIntegrals integrate_panels(const Trajectory& traj, double t1, double t2,
                                const VolumeProfile& profile, double p, std::size_t panels) {
    if (panels % 2 != 0) ++panels;
    const std::size_t nodes = panels + 1;
    const std::vector<TrajectorySample> grid = resample_trajectory(traj, t1, t2, nodes);
    const long double qm1 = conjugate_exponent(p) - 1.0L;
    const long double pl = p;

    std::vector<long double> f_num(nodes), f_den(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const long double v = profile.value_l(grid[i].t);
        const long double xprime = signed_pow_l(grid[i].w / v, qm1);
        f_num[i] = grid[i].w * xprime;                     // = v |x'|^p
        f_den[i] = v * powl(fabsl(grid[i].x), pl);
    }
    const long double h = (static_cast<long double>(t2) - t1) / panels;
    PanelIntegrals out;
    for (std::size_t i = 0; i + 2 <= panels; i += 2) {
        out.numerator += h / 3.0L * (f_num[i] + 4.0L * f_num[i + 1] + f_num[i + 2]);
        out.denominator += h / 3.0L * (f_den[i] + 4.0L * f_den[i + 1] + f_den[i + 2]);
    }
    return out;
}

bool matches_zero(double t, const std::vector<double>& zeros, double tol) {
    for (double z : zeros) {
        if (std::fabs(z - t) <= tol) return true;
    }
    return false;
}

}  // namespace

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::annulus_upper_bound: return "annulus_upper_bound";
        case BoundKind::theta_bound: return "theta_bound";
        case BoundKind::essential_bound: return "essential_bound";
    }
    return "?";
}

RayleighResult rayleigh_quotient(const Trajectory& traj, std::pair<double, double> zero_pair,
                                 const VolumeProfile& profile, double p, std::size_t panels) {
    const auto [t1, t2] = zero_pair;
    if (!(t1 < t2)) throw UsageError("rayleigh_quotient needs t1 < t2");

    // the pair must be consecutive zeros of this trajectory; the span start
    // counts as a zero when the solution launches from x = 0
    std::vector<double> zeros = find_zeros(traj);
    if (!traj.samples.empty() && traj.samples.front().x == 0.0L) {
        zeros.insert(zeros.begin(), traj.t_start);
    }
    const double tol = 1e-6 * std::max(1.0, std::fabs(t2));
    if (!matches_zero(t1, zeros, tol) || !matches_zero(t2, zeros, tol)) {
        throw UsageError("rayleigh_quotient: endpoints are not zeros of this trajectory");
    }
    for (double z : zeros) {
        if (z > t1 + tol && z < t2 - tol) {
            throw UsageError("rayleigh_quotient: zeros are not consecutive");
        }
    }

    const PanelIntegrals ints = integrate_panels(traj, t1, t2, profile, p, panels);
    RayleighResult r;
    r.t1 = t1;
    r.t2 = t2;
    r.numerator = static_cast<double>(ints.numerator);
    r.denominator = static_cast<double>(ints.denominator);
    if (!(ints.numerator > 0.0L) || !(ints.denominator > 0.0L)) {
        throw Error("rayleigh_quotient: non-positive energy or mass integral");
    }
    r.quotient = static_cast<double>(ints.numerator / ints.denominator);
    return r;
}

double annulus_first_eigenvalue(const VolumeProfile& profile, double p, double t1, double t2,
                                double rel_tol, const IntegrateOptions& options) {
    if (!(profile.t0() <= t1 + 1e-12) || !(t1 < t2)) {
        throw UsageError("annulus_first_eigenvalue needs t0 <= t1 < t2");
    }
    conjugate_exponent(p);  // validates p

    // the shot launches from x = 0 with x' = 1 > 0, so a zero exists in
    // (t1, t2] iff some later sample has x <= 0
    auto has_zero = [&](double lambda) {
        const HalfLinearParams prm = HalfLinearParams::make(p, lambda);
        HalfLinearRun run = run_halflinear(prm, profile, 0.0, 1.0, {t1, t2}, options);
        if (run.failure) {
            throw IntegrationError("shooting integration failed: " + *run.failure, run.reached);
        }
        const auto& s = run.trajectory.samples;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i].x <= 0.0L) return true;
        }
        return false;
    };

    double lo = 1e-8;
    double hi = 1.0;
    while (has_zero(lo)) {
        hi = lo;
        lo *= 0.1;
        if (lo < 1e-30) throw BracketError("annulus eigenvalue below 1e-30; bracket failure");
    }
    while (!has_zero(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) {
            throw BracketError("no sign change found for lambda up to 1e8; bracket failure");
        }
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (has_zero(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

nlohmann::ordered_json to_json(const SpectralBound& b) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(b.kind);
    j["value"] = b.value;
    j["beta"] = b.beta;
    j["p"] = b.p;
    j["theta_window"] = {b.theta_window_lo, b.theta_window_hi};
    j["criterion"] = b.criterion;
    return j;
}

namespace {

SpectralBound growth_bound(const VolumeProfile& profile, double p, double t_max, BoundKind kind) {
    conjugate_exponent(p);  // validates p
    require_infinite_volume(profile);
    const GrowthReport growth = growth_exponent(profile, t_max);
    double beta;
    if (growth.analytic) {
        beta = *growth.analytic;
    } else {
        beta = growth.theta_estimate <= kThetaZeroTol ? 0.0 : growth.theta_estimate;
    }
    SpectralBound b;
    b.kind = kind;
    b.beta = beta;
    b.p = p;
    b.theta_window_lo = growth.fit_lo;
    b.theta_window_hi = growth.fit_hi;
    b.value = beta == 0.0 ? 0.0 : std::pow(beta / p, p);
    b.criterion = beta == 0.0 ? "subexponential growth: first eigenvalue of the complement is 0"
                              : "growth exponent beta gives the upper bound beta^p / p^p";
    return b;
}

}  // namespace

SpectralBound theta_upper_bound(const VolumeProfile& profile, double p, double t_max) {
    return growth_bound(profile, p, t_max, BoundKind::theta_bound);
}

SpectralBound essential_bound(const VolumeProfile& profile, double p, double t_max) {
    SpectralBound b = growth_bound(profile, p, t_max, BoundKind::essential_bound);
    b.criterion = "essential first eigenvalue bounded by theta^p / p^p under infinite volume";
    return b;
}

SweepResult bound_witness_sweep(const VolumeProfile& profile, double p,
                                const std::vector<double>& lambda_grid, double t_start,
                                double horizon, const IntegrateOptions& options) {
    if (lambda_grid.empty()) throw UsageError("lambda grid must be nonempty");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) throw UsageError("lambda grid values must be positive");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) {
            throw UsageError("lambda grid must be strictly increasing");
        }
    }

    SweepResult sweep;
    sweep.t_start = t_start;
    sweep.horizon = horizon;
    sweep.p = p;

    auto oscillates = [&](double lambda) -> bool {
        const HalfLinearParams prm = HalfLinearParams::make(p, lambda);
        const OscillationReport rep =
            oscillation_evidence(prm, profile, t_start, horizon, 2, options);
        return rep.verdict == Verdict::oscillatory_evidence;
    };

    std::vector<char> grid_oscillates(lambda_grid.size(), 0);
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const double lambda = lambda_grid[i];
        SweepRow row;
        row.lambda = lambda;
        try {
            const HalfLinearParams prm = HalfLinearParams::make(p, lambda);
            OscillationRun run = oscillation_run(prm, profile, t_start, horizon, 2, options);
            if (run.report.error_note) row.note = *run.report.error_note;
            if (run.report.zeros.size() >= 2) {
                grid_oscillates[i] = 1;
                const double z1 = run.report.zeros[0];
                const double z2 = run.report.zeros[1];
                row.zero_pair = {z1, z2};
                row.quotient =
                    rayleigh_quotient(run.trajectory, {z1, z2}, profile, p).quotient;
            }
        } catch (const Error& e) {
            row.note = e.what();
        }
        sweep.rows.push_back(std::move(row));
    }

    // empirical oscillation threshold: bisect between the largest
    // non-oscillatory and the smallest oscillatory lambda
    std::optional<double> lo;  // no oscillation
    std::optional<double> hi;  // oscillation
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (grid_oscillates[i]) {
            hi = lambda_grid[i];
            if (i > 0 && !grid_oscillates[i - 1]) lo = lambda_grid[i - 1];
            break;
        }
    }
    if (!hi) {
        sweep.lambda_star_note = "no oscillation found on the grid within the horizon";
        return sweep;
    }
    if (!lo) {
        // probe below the grid
        double probe = *hi;
        for (int k = 0; k < 24 && !lo; ++k) {
            probe *= 0.5;
            if (probe < 1e-6) break;
            try {
                if (!oscillates(probe)) {
                    lo = probe;
                } else {
                    hi = probe;
                }
            } catch (const Error&) {
                break;
            }
        }
        if (!lo) {
            sweep.lambda_star = 0.0;
            sweep.lambda_star_note = "oscillatory for every probed lambda >= 1e-6";
            return sweep;
        }
    }
    double a = *lo;
    double b = *hi;
    try {
        while (b - a > 1e-3) {
            const double mid = 0.5 * (a + b);
            if (oscillates(mid)) {
                b = mid;
            } else {
                a = mid;
            }
        }
        sweep.lambda_star = 0.5 * (a + b);
        sweep.lambda_star_note = "bisected threshold of two-zero evidence within the horizon";
    } catch (const Error& e) {
        sweep.lambda_star_note = std::string("threshold bisection aborted: ") + e.what();
    }
    return sweep;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "lambda,t1,t2,quotient,verdict\n";
    for (const auto& row : sweep.rows) {
        os << fmt_double(row.lambda) << ',';
        if (row.zero_pair) {
            os << fmt_double(row.zero_pair->first) << ',' << fmt_double(row.zero_pair->second)
               << ',' << fmt_double(*row.quotient) << ",pair_found\n";
        } else {
            os << ",,,none\n";
        }
    }
    if (sweep.lambda_star) {
        os << "# lambda_star," << fmt_double(*sweep.lambda_star) << '\n';
    }
    os << "# lambda_star_note," << sweep.lambda_star_note << '\n';
}

nlohmann::ordered_json sweep_to_json(const SweepResult& sweep) {
    nlohmann::ordered_json j;
    j["p"] = sweep.p;
    j["t_start"] = sweep.t_start;
    j["horizon"] = sweep.horizon;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : sweep.rows) {
        nlohmann::ordered_json r;
        r["lambda"] = row.lambda;
        if (row.zero_pair) {
            r["t1"] = row.zero_pair->first;
            r["t2"] = row.zero_pair->second;
            r["quotient"] = *row.quotient;
            r["verdict"] = "pair_found";
        } else {
            r["verdict"] = "none";
        }
        if (!row.note.empty()) r["note"] = row.note;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    if (sweep.lambda_star) {
        j["lambda_star"] = *sweep.lambda_star;
    } else {
        j["lambda_star"] = nullptr;
    }
    j["lambda_star_note"] = sweep.lambda_star_note;
    return j;
}

}  // namespace halflin
