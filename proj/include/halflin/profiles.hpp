#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "halflin/errors.hpp"
#include "halflin/interp.hpp"

namespace halflin {

enum class ProfileKind { constant, power, exponential, model_manifold, tabulated };

std::string to_string(ProfileKind k);

/// Radial coefficient/volume profile: a positive v(t) on [t0, infinity)
/// (or on the table span for tabulated data), with closed-form cumulative
/// volume where one exists. Immutable after construction.
class VolumeProfile {
public:
    static VolumeProfile constant(double value = 1.0, double t0 = 0.0);
    static VolumeProfile power(double amplitude, double exponent, double t0 = 0.0);
    static VolumeProfile exponential(double amplitude, double rate, double t0 = 0.0);
    static VolumeProfile tabulated(std::vector<double> t, std::vector<double> v);

    static VolumeProfile from_json(const nlohmann::json& j);
    static VolumeProfile from_file(const std::string& path);
    /// "kind:key=val,key=val" inline form, a path to a .json/.csv file, or
    /// inline JSON starting with '{'.
    static VolumeProfile from_spec_string(const std::string& spec);
    static VolumeProfile from_csv(std::istream& in);

    ProfileKind kind() const noexcept { return kind_; }
    double t0() const noexcept { return t0_; }
    /// End of the domain on which v can be evaluated (inf unless tabulated).
    double domain_end() const noexcept { return domain_end_; }

    double value(double t) const;       // v(t)
    double log_value(double t) const;   // log v(t), stable for large t
    long double value_l(double t) const;

    bool has_closed_form() const noexcept { return has_closed_form_; }
    long double closed_cumulative_l(double t) const;  // requires has_closed_form()

    /// Exact growth exponent when the kind determines it (power -> 0,
    /// exponential -> max(c,0), model manifold -> (n-1)sqrt(|kappa|)).
    std::optional<double> analytic_theta() const noexcept { return analytic_theta_; }

    nlohmann::ordered_json to_json() const;
    std::string describe() const;

    // model-manifold accessors (valid only for that kind)
    int dimension() const noexcept { return n_; }
    double curvature() const noexcept { return kappa_; }

    // constant/power/exponential accessors
    double amplitude() const noexcept { return amplitude_; }
    double rate() const noexcept { return rate_; }

private:
    VolumeProfile() = default;
    void validate_positive() const;
    void validate_closed_form() const;

    ProfileKind kind_ = ProfileKind::constant;
    double t0_ = 0.0;
    double domain_end_ = 0.0;
    double amplitude_ = 1.0;   // constant value / power amplitude / exponential amplitude
    double rate_ = 0.0;        // power exponent / exponential rate
    int n_ = 0;                // model-manifold dimension
    double kappa_ = 0.0;       // model-manifold curvature (<= 0)
    double sphere_area_ = 0.0; // omega_{n-1}
    std::shared_ptr<const MonotoneCubic> table_;
    bool has_closed_form_ = false;
    std::optional<double> analytic_theta_;

    friend VolumeProfile model_manifold_profile(int n, double kappa);
};

/// Rotationally symmetric model space of dimension n and constant curvature
/// kappa <= 0: v(r) = omega_{n-1} f(r)^{n-1} with f = r (kappa = 0) or
/// sinh(sqrt(|kappa|) r)/sqrt(|kappa|). Positive kappa is rejected: those
/// models are compact and have finite volume.
VolumeProfile model_manifold_profile(int n, double kappa);

/// V(t) = int_{t0}^t v; closed form when available, adaptive quadrature
/// otherwise. Throws OverflowError when V exceeds double range (use
/// log_cumulative_volume instead).
double cumulative_volume(const VolumeProfile& profile, double t);

/// log V(t), stable for exponentially growing profiles.
double log_cumulative_volume(const VolumeProfile& profile, double t);

struct GrowthReport {
    double theta_estimate = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double residual = 0.0;  // rms residual of the log-linear fit
    std::optional<double> analytic;
};

/// Least-squares slope of log V(t) against t over [t_max/2, t_max].
GrowthReport growth_exponent(const VolumeProfile& profile, double t_max);

/// True when V(t) verifiably grows without a ratio plateau across doubling
/// horizons (the numerical surrogate for infinite total volume).
bool volume_divergent(const VolumeProfile& profile);

/// Throws HypothesisViolation naming the infinite-volume hypothesis.
void require_infinite_volume(const VolumeProfile& profile);

/// Nonincreasing positive decay envelope k(s) for radial Ricci lower bounds,
/// with finite moment b0 = int_0^inf s k(s) ds (computed at construction).
class RicciDecayProfile {
public:
    RicciDecayProfile(std::function<double(double)> k, int dimension);

    double k(double s) const { return k_(s); }
    int dimension() const noexcept { return n_; }
    double b0() const noexcept { return b0_; }

private:
    std::function<double(double)> k_;
    int n_;
    double b0_;
};

/// Volume bound e^{b0} r^n for spaces with asymptotically nonnegative
/// radial Ricci curvature.
double ricci_volume_bound(const RicciDecayProfile& decay, double r);

/// Gamma function via a Lanczos approximation (relative error < 1e-12 for
/// the integer and half-integer arguments used here).
double gamma_function(double z);

/// Area of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

}  // namespace halflin
