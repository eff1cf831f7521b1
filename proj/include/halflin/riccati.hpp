#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "halflin/core.hpp"
#include "halflin/ode.hpp"
#include "halflin/profiles.hpp"

namespace halflin {

enum class RiccatiOrigin { direct_integration, substitution_from_solution };
std::string to_string(RiccatiOrigin o);

struct BlowUp {
    double time = 0.0;                        // extrapolated escape time
    std::vector<double> threshold_sequence;   // crossing times of 1e10, 1e11, 1e12
};

struct RiccatiSample {
    double t;
    double y;
};

/// Scalar solution of y' = lambda v + (p-1) v^{1-q} |y|^q. Along solutions
/// produced by the substitution y = -v Phi(x')/Phi(x) the forcing term
/// equals (p-1) v |x'/x|^p >= 0, which is why the right-hand side carries
/// |y|^q rather than a signed power.
struct RiccatiTrajectory {
    RiccatiTrajectory(HalfLinearParams params_, VolumeProfile profile_, RiccatiOrigin origin_)
        : params(params_), profile(std::move(profile_)), origin(origin_) {}

    HalfLinearParams params;
    VolumeProfile profile;
    RiccatiOrigin origin;
    std::vector<RiccatiSample> samples;
    std::optional<BlowUp> blow_up;
};

/// Integrates the Riccati equation; stops when |y| escapes 1e12 and reports
/// the blow-up time extrapolated from the crossing times of 1e10/1e11/1e12.
RiccatiTrajectory integrate_riccati(const HalfLinearParams& params, const VolumeProfile& profile,
                                    double y0, std::pair<double, double> span,
                                    const IntegrateOptions& options = {});

/// Substitution y = -w / phi(x) along a zero-free window [t_lo, t_hi] of a
/// half-linear trajectory. With resample_nodes > 0 the window is re-evaluated
/// on a uniform grid fine enough for finite-difference residual checks;
/// resample_nodes == 0 uses the trajectory's own accepted steps.
RiccatiTrajectory riccati_from_solution(const Trajectory& trajectory, double t_lo, double t_hi,
                                        std::size_t resample_nodes = 4097);

/// Max over interior samples of |centered-difference y' - (lambda v +
/// (p-1) v^{1-q} |y|^q)| / (1 + |y'|).
double riccati_residual(const RiccatiTrajectory& rt, const VolumeProfile& profile,
                        const HalfLinearParams& params);

enum class CaseClass { case_I, case_II, inconclusive };
std::string to_string(CaseClass c);

/// Convergence class of int^inf v^{1-q}: analytic for closed-form kinds,
/// doubling-horizon increments otherwise.
CaseClass case_classification(const VolumeProfile& profile, double p, double horizon);

struct GrowthBoundReport {
    bool growth_holds = true;   // y(t) >= y(T) exp(p lambda^{1/p} (t-T))
    bool young_holds = true;    // p lambda^{1/p} y <= lambda v + (p-1) v^{1-q} |y|^q
    std::size_t samples_checked = 0;
    double worst_growth_margin = 0.0;  // min of (y - bound) / max(1, bound)
    double worst_young_margin = 0.0;   // min of (rhs - lhs) / max(1, rhs)
    std::optional<double> first_violation_t;
    double T_used = 0.0;
    double y_at_T = 0.0;
};

/// Verifies the exponential growth bound and the Young-step inequality at
/// every sample with t >= T. Requires y(T) > 0 and lambda > 0.
GrowthBoundReport growth_bound_check(const RiccatiTrajectory& rt, const HalfLinearParams& params,
                                     double T);

void write_riccati_csv(std::ostream& os, const RiccatiTrajectory& rt);
nlohmann::ordered_json blow_up_to_json(const BlowUp& b);

}  // namespace halflin
