#include "halflin/criteria.hpp"

#include <cmath>

namespace halflin {

std::string to_string(CriterionSource s) {
    switch (s) {
        case CriterionSource::theorem1_a: return "theorem1_a";
        case CriterionSource::theorem1_b: return "theorem1_b";
        case CriterionSource::leighton_wintner: return "leighton_wintner";
        case CriterionSource::none_applicable: return "none_applicable";
    }
    return "?";
}

std::string to_string(Predicted p) {
    return p == Predicted::oscillatory ? "oscillatory" : "not_covered";
}

std::string to_string(Consistency c) {
    switch (c) {
        case Consistency::CONSISTENT: return "CONSISTENT";
        case Consistency::HORIZON_LIMITED: return "HORIZON_LIMITED";
        case Consistency::UNINFORMATIVE: return "UNINFORMATIVE";
    }
    return "?";
}

nlohmann::ordered_json to_json(const CriterionPrediction& pred) {
    nlohmann::ordered_json j;
    j["source"] = to_string(pred.source);
    j["predicted"] = to_string(pred.predicted);
    j["theta"] = pred.theta;
    j["lambda"] = pred.lambda;
    j["threshold"] = pred.threshold;
    return j;
}

CriterionPrediction theorem1_predict(const VolumeProfile& profile, double p, double lambda,
                                     double t_max) {
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
    conjugate_exponent(p);  // validates p
    require_infinite_volume(profile);

    CriterionPrediction pred;
    pred.volume_divergent = true;
    pred.lambda = lambda;
    pred.p = p;

    const GrowthReport growth = growth_exponent(profile, t_max);
    pred.theta = growth.theta_estimate;

    if (lambda > 0.0 && pred.theta <= kThetaZeroTol) {
        pred.source = CriterionSource::theorem1_a;
        pred.predicted = Predicted::oscillatory;
        pred.threshold = 0.0;
        return pred;
    }
    const double c = std::max(pred.theta, 0.0);
    pred.threshold = std::pow(c / p, p);
    if (lambda > pred.threshold * (1.0 + 1e-9)) {
        pred.source = CriterionSource::theorem1_b;
        pred.predicted = Predicted::oscillatory;
        return pred;
    }
    pred.source = CriterionSource::none_applicable;
    pred.predicted = Predicted::not_covered;
    return pred;
}

CriterionPrediction leighton_wintner_check(const VolumeProfile& profile, double p, double lambda,
                                           double horizon) {
    if (!(lambda > 0.0)) throw DomainError("leighton_wintner_check needs lambda > 0");

    CriterionPrediction pred;
    pred.lambda = lambda;
    pred.p = p;
    pred.theta = 0.0;
    pred.threshold = 0.0;
    pred.volume_divergent = volume_divergent(profile);

    CaseClass cls = CaseClass::inconclusive;
    try {
        cls = case_classification(profile, p, horizon);
    } catch (const Error&) {
        cls = CaseClass::inconclusive;  // numerics absorbed into not_covered
    }
    if (cls == CaseClass::case_II && pred.volume_divergent) {
        pred.source = CriterionSource::leighton_wintner;
        pred.predicted = Predicted::oscillatory;
    } else {
        pred.source = CriterionSource::none_applicable;
        pred.predicted = Predicted::not_covered;
    }
    return pred;
}

Consistency cross_validate(const CriterionPrediction& prediction,
                           const OscillationReport& report) {
    if (prediction.lambda != report.lambda || prediction.p != report.p) {
        throw UsageError("cross_validate: prediction and report refer to different (p, lambda)");
    }
    if (prediction.predicted == Predicted::not_covered) return Consistency::UNINFORMATIVE;
    return report.verdict == Verdict::oscillatory_evidence ? Consistency::CONSISTENT
                                                           : Consistency::HORIZON_LIMITED;
}

}  // namespace halflin
