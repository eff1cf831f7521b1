#pragma once

#include <string>

#include <json.hpp>

#include "halflin/core.hpp"
#include "halflin/ode.hpp"
#include "halflin/profiles.hpp"
#include "halflin/riccati.hpp"

namespace halflin {

enum class CriterionSource { theorem1_a, theorem1_b, leighton_wintner, none_applicable };
enum class Predicted { oscillatory, not_covered };
std::string to_string(CriterionSource s);
std::string to_string(Predicted p);

struct CriterionPrediction {
    CriterionSource source = CriterionSource::none_applicable;
    Predicted predicted = Predicted::not_covered;
    double theta = 0.0;
    double lambda = 0.0;
    double threshold = 0.0;   // c^p / p^p for the exponential-growth branch
    bool volume_divergent = false;
    double p = 0.0;
};

nlohmann::ordered_json to_json(const CriterionPrediction& pred);

/// Numerical tolerance deciding "theta = 0" for the subexponential branch.
inline constexpr double kThetaZeroTol = 0.02;

/// Oscillation prediction from the growth exponent: subexponential growth
/// with lambda > 0, or lambda strictly above theta^p / p^p. Throws
/// HypothesisViolation when the total volume is not verifiably divergent.
CriterionPrediction theorem1_predict(const VolumeProfile& profile, double p, double lambda,
                                     double t_max);

/// Leighton-Wintner branch: oscillatory when int v^{1-q} and int lambda*v
/// both diverge (convergence class case_II plus divergent volume).
CriterionPrediction leighton_wintner_check(const VolumeProfile& profile, double p, double lambda,
                                           double horizon);

enum class Consistency { CONSISTENT, HORIZON_LIMITED, UNINFORMATIVE };
std::string to_string(Consistency c);

/// Compares a prediction against finite-horizon evidence. A prediction of
/// oscillation with no zeros found is horizon-limited, never a refutation.
Consistency cross_validate(const CriterionPrediction& prediction,
                           const OscillationReport& report);

}  // namespace halflin
