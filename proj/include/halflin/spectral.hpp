#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "halflin/core.hpp"
#include "halflin/ode.hpp"
#include "halflin/profiles.hpp"

namespace halflin {

/// Rayleigh data of an annulus test function built from a half-linear
/// solution between consecutive zeros t1 < t2:
/// numerator = int v |x'|^p, denominator = int v |x|^p.
struct RayleighResult {
    double t1 = 0.0;
    double t2 = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double quotient = 0.0;
};

/// Computes the Rayleigh quotient over a consecutive zero pair of the
/// trajectory, by composite Simpson on uniformly resampled sub-panels.
/// The pair must consist of zeros of this trajectory (t_start counts when
/// the solution starts at a zero); anything else is a usage error.
RayleighResult rayleigh_quotient(const Trajectory& trajectory, std::pair<double, double> zero_pair,
                                 const VolumeProfile& profile, double p,
                                 std::size_t panels = 1024);

/// Smallest lambda whose solution with x(t1) = 0, x'(t1) = 1 first vanishes
/// at t2, located by bisection on lambda (first-zero location decreases in
/// lambda). Equals the variational first eigenvalue of the radial
/// p-Laplacian on the annulus.
double annulus_first_eigenvalue(const VolumeProfile& profile, double p, double t1, double t2,
                                double rel_tol = 1e-8, const IntegrateOptions& options = {});

enum class BoundKind { annulus_upper_bound, theta_bound, essential_bound };
std::string to_string(BoundKind k);

struct SpectralBound {
    BoundKind kind = BoundKind::theta_bound;
    double value = 0.0;
    double beta = 0.0;     // growth exponent used
    double p = 0.0;
    double theta_window_lo = 0.0;
    double theta_window_hi = 0.0;
    std::string criterion;  // which statement produced the bound
};

nlohmann::ordered_json to_json(const SpectralBound& b);

/// beta^p / p^p with beta the growth exponent (analytic when the profile
/// kind pins it, estimated otherwise; subexponential profiles give exactly
/// 0). Requires verifiably infinite volume.
SpectralBound theta_upper_bound(const VolumeProfile& profile, double p, double t_max);

/// Same number reported against the compact-exhaustion limit definition of
/// the essential first eigenvalue.
SpectralBound essential_bound(const VolumeProfile& profile, double p, double t_max);

struct SweepRow {
    double lambda = 0.0;
    std::optional<std::pair<double, double>> zero_pair;
    std::optional<double> quotient;
    std::string note;  // per-row failure, if any
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> lambda_star;  // bisected oscillation threshold
    std::string lambda_star_note;
    double t_start = 0.0;
    double horizon = 0.0;
    double p = 0.0;
};

/// For each lambda: detect zeros, take the first consecutive pair past
/// t_start, and record its Rayleigh quotient - the witness chain
/// lambda_1(annulus) <= quotient <= lambda. Also bisects the empirical
/// oscillation threshold (two zeros within the horizon) to 1e-3.
SweepResult bound_witness_sweep(const VolumeProfile& profile, double p,
                                const std::vector<double>& lambda_grid, double t_start,
                                double horizon, const IntegrateOptions& options = {});

void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
nlohmann::ordered_json sweep_to_json(const SweepResult& sweep);

}  // namespace halflin
