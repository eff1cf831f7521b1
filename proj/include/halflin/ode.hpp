#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "halflin/core.hpp"
#include "halflin/profiles.hpp"

namespace halflin {

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double init_step = 1e-4;
    double max_step_fraction = 0.01;  // max step = fraction of the span length
    long max_steps = 8'000'000;
    double zero_tol = 1e-10;  // absolute time tolerance of zero refinement
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
};

/// One accepted step of the half-linear system. x and w are stored in a
/// normalized scale: true x = x * exp(log_scale), true w = w * exp((p-1) *
/// log_scale). The equation is homogeneous of degree p-1, so the
/// normalization is exact; it keeps the solution envelope O(1) over runs on
/// which x decays through thousands of e-folds.
struct TrajectorySample {
    double t;
    long double x;
    long double w;  // quasi-derivative v(t) * Phi(x'(t))
    double log_scale;
};

/// Dense solution of (v Phi(x'))' + lambda v Phi(x) = 0 in quasi-derivative
/// coordinates. Immutable after integration.
struct Trajectory {
    Trajectory(HalfLinearParams params_, VolumeProfile profile_, IntegrateOptions options_)
        : params(params_), profile(std::move(profile_)), options(options_) {}

    HalfLinearParams params;
    VolumeProfile profile;
    IntegrateOptions options;
    std::vector<TrajectorySample> samples;
    StepStats stats;
    double t_start = 0.0;
    double t_end = 0.0;

    long double x_value(std::size_t i) const {
        return samples[i].x * expl(static_cast<long double>(samples[i].log_scale));
    }
    long double w_value(std::size_t i) const {
        return samples[i].w *
               expl(static_cast<long double>((params.p() - 1.0) * samples[i].log_scale));
    }

    /// Checks sample-time monotonicity and that (x, w) never both vanish.
    void validate() const;
};

/// Integrates the first-order system x' = phi_inverse(w / v(t)),
/// w' = -lambda v(t) phi(x) from x(t0) = x0, w(t0) = v(t0) phi(xprime0).
/// Throws IntegrationError on step underflow and OverflowError when the
/// state or coefficient leaves the representable range.
Trajectory integrate_halflinear(const HalfLinearParams& params, const VolumeProfile& profile,
                                double x0, double xprime0, std::pair<double, double> span,
                                const IntegrateOptions& options = {});

/// Like integrate_halflinear but reports failures in-band so callers can
/// consume the partial trajectory.
struct HalfLinearRun {
    Trajectory trajectory;
    std::optional<std::string> failure;
    double reached = 0.0;
};
HalfLinearRun run_halflinear(const HalfLinearParams& params, const VolumeProfile& profile,
                             double x0, double xprime0, std::pair<double, double> span,
                             const IntegrateOptions& options = {});

struct ZeroScan {
    std::vector<double> zeros;                 // refined zero times, ascending
    std::vector<double> tangential_warnings;   // |x| dips without a sign change
};

/// Refines every sign change of x by bisection on re-integrated local
/// segments, to the trajectory's zero_tol in time.
ZeroScan scan_zeros(const Trajectory& trajectory);
std::vector<double> find_zeros(const Trajectory& trajectory);

enum class Verdict { oscillatory_evidence, no_zero_found };
std::string to_string(Verdict v);

struct OscillationReport {
    std::vector<double> zeros;
    Verdict verdict = Verdict::no_zero_found;
    int min_zeros_required = 2;
    double t_start = 0.0;
    double horizon = 0.0;
    double p = 0.0;
    double lambda = 0.0;
    std::string profile_desc;
    std::vector<double> tangential_warnings;
    std::optional<std::string> error_note;  // integration failure, if any
    std::optional<double> reached_t;
};

/// Integrates from the canonical initial condition x(t_start) = 0,
/// x'(t_start) = 1 and harvests zeros on (t_start, horizon]. The verdict can
/// only report evidence, never nonoscillation.
OscillationReport oscillation_evidence(const HalfLinearParams& params,
                                       const VolumeProfile& profile, double t_start,
                                       double horizon, int min_zeros = 2,
                                       const IntegrateOptions& options = {});

/// oscillation_evidence plus the trajectory it was computed from.
struct OscillationRun {
    OscillationReport report;
    Trajectory trajectory;
};
OscillationRun oscillation_run(const HalfLinearParams& params, const VolumeProfile& profile,
                               double t_start, double horizon, int min_zeros = 2,
                               const IntegrateOptions& options = {});

/// Re-evaluates the trajectory on a uniform grid of `nodes` points covering
/// [t_lo, t_hi] by local re-integration from the stored samples. All output
/// samples share the scale of the sample the resampling starts from.
std::vector<TrajectorySample> resample_trajectory(const Trajectory& trajectory, double t_lo,
                                                  double t_hi, std::size_t nodes);

/// CSV export "t,x,w" at native steps (resample_nodes == 0) or uniformly
/// resampled. Values are descaled to the true solution.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory,
                          std::size_t resample_nodes = 0);

}  // namespace halflin
