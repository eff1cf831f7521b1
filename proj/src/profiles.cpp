#include "halflin/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "halflin/quadrature.hpp"
#include "halflin/util.hpp"

namespace halflin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log sinh(u) for u > 0 without overflow.
double log_sinh(double u) {
    if (u <= 0.0) return -kInf;
    return u + std::log1p(-std::exp(-2.0 * u)) - std::log(2.0);
}

double parse_number(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw UsageError("cannot parse number '" + s + "'");
    return v;
}

}  // namespace

double gamma_function(double z) {
    // Lanczos, g = 7, 9 coefficients.
    static const double coef[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = std::acos(-1.0);
    if (z < 0.5) {
        return pi / (std::sin(pi * z) * gamma_function(1.0 - z));
    }
    z -= 1.0;
    double x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double unit_sphere_area(int n) {
    if (n < 2) throw ParameterError("unit sphere area needs dimension >= 2");
    const double pi = std::acos(-1.0);
    return 2.0 * std::pow(pi, 0.5 * n) / gamma_function(0.5 * n);
}

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::constant: return "constant";
        case ProfileKind::power: return "power";
        case ProfileKind::exponential: return "exponential";
        case ProfileKind::model_manifold: return "model_manifold";
        case ProfileKind::tabulated: return "tabulated";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// construction

void VolumeProfile::validate_positive() const {
    if (kind_ == ProfileKind::tabulated) return;  // checked against the raw table
    const double span = std::min(100.0, domain_end_ - t0_);
    for (int i = 1; i <= 64; ++i) {
        const double s = static_cast<double>(i) / 64.0;
        const double t = t0_ + span * s * s;  // cluster samples near t0
        if (!(value(t) > 0.0)) {
            throw DomainError("profile must satisfy v(t) > 0 on (t0, inf); failed at t = " +
                              std::to_string(t));
        }
    }
}

void VolumeProfile::validate_closed_form() const {
    if (!has_closed_form_) return;
    if (log_value(t0_ + 10.0) > 600.0) return;  // magnitudes beyond double; skip self-check
    // increments over [t0+1, t0+10]: v is smooth away from the t0 corner,
    // where fractional powers would stall the Simpson refinement
    const double a = t0_ + 1.0;
    for (double dt : {2.5, 5.0, 10.0}) {
        const double t = t0_ + dt;
        const double closed =
            static_cast<double>(closed_cumulative_l(t) - closed_cumulative_l(a));
        const double numeric = quad::integrate([this](double s) { return value(s); }, a, t);
        if (std::fabs(closed - numeric) > 1e-8 * std::max(1.0, std::fabs(closed))) {
            throw Error("closed-form cumulative volume disagrees with quadrature at t = " +
                        std::to_string(t));
        }
    }
}

VolumeProfile VolumeProfile::constant(double value, double t0) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("constant profile needs v > 0");
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be finite and >= 0");
    VolumeProfile p;
    p.kind_ = ProfileKind::constant;
    p.t0_ = t0;
    p.domain_end_ = kInf;
    p.amplitude_ = value;
    p.has_closed_form_ = true;
    p.analytic_theta_ = 0.0;
    p.validate_positive();
    p.validate_closed_form();
    return p;
}

VolumeProfile VolumeProfile::power(double amplitude, double exponent, double t0) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude) || !std::isfinite(exponent)) {
        throw DomainError("power profile needs amplitude > 0 and finite exponent");
    }
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be finite and >= 0");
    if (exponent < 0.0 && t0 <= 0.0) {
        throw DomainError("power profile with negative exponent needs t0 > 0");
    }
    VolumeProfile p;
    p.kind_ = ProfileKind::power;
    p.t0_ = t0;
    p.domain_end_ = kInf;
    p.amplitude_ = amplitude;
    p.rate_ = exponent;
    p.has_closed_form_ = true;
    p.analytic_theta_ = 0.0;
    p.validate_positive();
    p.validate_closed_form();
    return p;
}

VolumeProfile VolumeProfile::exponential(double amplitude, double rate, double t0) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude) || !std::isfinite(rate)) {
        throw DomainError("exponential profile needs amplitude > 0 and finite rate");
    }
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be finite and >= 0");
    VolumeProfile p;
    p.kind_ = ProfileKind::exponential;
    p.t0_ = t0;
    p.domain_end_ = kInf;
    p.amplitude_ = amplitude;
    p.rate_ = rate;
    p.has_closed_form_ = true;
    p.analytic_theta_ = std::max(rate, 0.0);
    p.validate_positive();
    p.validate_closed_form();
    return p;
}

VolumeProfile VolumeProfile::tabulated(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.size() < 4) {
        throw ParameterError("tabulated profile needs >= 4 matching (t, v) rows");
    }
    if (!(t.front() >= 0.0)) throw DomainError("t0 must be >= 0");
    for (double val : v) {
        if (!(val > 0.0) || !std::isfinite(val)) {
            throw DomainError("tabulated profile rejects non-positive v values");
        }
    }
    VolumeProfile p;
    p.kind_ = ProfileKind::tabulated;
    p.t0_ = t.front();
    p.domain_end_ = t.back();
    p.table_ = std::make_shared<MonotoneCubic>(std::move(t), std::move(v));
    p.has_closed_form_ = false;
    return p;
}

VolumeProfile model_manifold_profile(int n, double kappa) {
    if (n < 2) throw ParameterError("model manifold needs dimension n >= 2");
    if (kappa > 0.0) {
        throw GeometryError(
            "positive curvature gives a compact model with finite volume; "
            "the infinite-volume hypothesis fails");
    }
    if (!std::isfinite(kappa)) throw DomainError("curvature must be finite");
    VolumeProfile p;
    p.kind_ = ProfileKind::model_manifold;
    p.t0_ = 0.0;
    p.domain_end_ = kInf;
    p.n_ = n;
    p.kappa_ = kappa;
    p.sphere_area_ = unit_sphere_area(n);
    p.has_closed_form_ = (n <= 4);
    p.analytic_theta_ = (kappa < 0.0) ? (n - 1) * std::sqrt(-kappa) : 0.0;
    p.validate_positive();
    p.validate_closed_form();
    return p;
}

// ---------------------------------------------------------------------------
// evaluation

double VolumeProfile::value(double t) const {
    if (t < t0_ - 1e-9) {
        throw DomainError("profile evaluated at t = " + std::to_string(t) + " < t0");
    }
    switch (kind_) {
        case ProfileKind::constant: return amplitude_;
        case ProfileKind::power:
            if (t == 0.0) return rate_ > 0.0 ? 0.0 : (rate_ == 0.0 ? amplitude_ : kInf);
            return amplitude_ * std::pow(t, rate_);
        case ProfileKind::exponential: return amplitude_ * std::exp(rate_ * t);
        case ProfileKind::model_manifold: {
            if (kappa_ == 0.0) return sphere_area_ * std::pow(t, n_ - 1);
            const double a = std::sqrt(-kappa_);
            return sphere_area_ * std::pow(std::sinh(a * t) / a, n_ - 1);
        }
        case ProfileKind::tabulated: return (*table_)(t);
    }
    return 0.0;
}

double VolumeProfile::log_value(double t) const {
    if (t < t0_ - 1e-9) {
        throw DomainError("profile evaluated at t = " + std::to_string(t) + " < t0");
    }
    switch (kind_) {
        case ProfileKind::constant: return std::log(amplitude_);
        case ProfileKind::power:
            if (t == 0.0) return rate_ > 0.0 ? -kInf : (rate_ == 0.0 ? std::log(amplitude_) : kInf);
            return std::log(amplitude_) + rate_ * std::log(t);
        case ProfileKind::exponential: return std::log(amplitude_) + rate_ * t;
        case ProfileKind::model_manifold: {
            if (t == 0.0) return -kInf;
            if (kappa_ == 0.0) return std::log(sphere_area_) + (n_ - 1) * std::log(t);
            const double a = std::sqrt(-kappa_);
            return std::log(sphere_area_) + (n_ - 1) * (log_sinh(a * t) - std::log(a));
        }
        case ProfileKind::tabulated: return std::log((*table_)(t));
    }
    return 0.0;
}

long double VolumeProfile::value_l(double t) const {
    const double lv = log_value(t);
    if (lv <= 690.0) return static_cast<long double>(value(t));
    return expl(static_cast<long double>(lv));
}

long double VolumeProfile::closed_cumulative_l(double t) const {
    if (!has_closed_form_) throw UsageError("profile has no closed-form cumulative volume");
    const long double tl = t;
    const long double t0l = t0_;
    switch (kind_) {
        case ProfileKind::constant: return amplitude_ * (tl - t0l);
        case ProfileKind::power: {
            const long double c = rate_;
            if (c == -1.0L) return amplitude_ * (logl(tl) - logl(t0l));
            const long double e = c + 1.0L;
            const long double head = t0_ == 0.0 ? 0.0L : powl(t0l, e);
            return amplitude_ * (powl(tl, e) - head) / e;
        }
        case ProfileKind::exponential: {
            const long double c = rate_;
            if (c == 0.0L) return amplitude_ * (tl - t0l);
            return amplitude_ * (expl(c * tl) - expl(c * t0l)) / c;
        }
        case ProfileKind::model_manifold: {
            const long double omega = sphere_area_;
            if (kappa_ == 0.0) {
                return omega * (powl(tl, n_) - powl(t0l, n_)) / n_;
            }
            const long double a = sqrtl(static_cast<long double>(-kappa_));
            const long double u = a * tl;
            const long double u0 = a * t0l;
            switch (n_) {
                case 2: return omega / (a * a) * (coshl(u) - coshl(u0));
                case 3: {
                    auto S = [](long double w) { return sinhl(2.0L * w) / 4.0L - w / 2.0L; };
                    return omega / (a * a * a) * (S(u) - S(u0));
                }
                case 4: {
                    auto C = [](long double w) {
                        const long double ch = coshl(w);
                        return ch * ch * ch / 3.0L - ch;
                    };
                    return omega / (a * a * a * a) * (C(u) - C(u0));
                }
                default: throw UsageError("no closed-form volume for model dimension > 4");
            }
        }
        case ProfileKind::tabulated: break;
    }
    throw UsageError("profile has no closed-form cumulative volume");
}

// ---------------------------------------------------------------------------
// cumulative volume

double cumulative_volume(const VolumeProfile& profile, double t) {
    if (t < profile.t0() - 1e-12) throw DomainError("cumulative_volume needs t >= t0");
    t = std::max(t, profile.t0());
    if (profile.kind() == ProfileKind::tabulated && t > profile.domain_end() + 1e-12) {
        throw DomainError("t beyond tabulated domain");
    }
    if (profile.has_closed_form()) {
        const long double v = profile.closed_cumulative_l(t);
        if (!(v <= std::numeric_limits<double>::max())) {
            throw OverflowError("cumulative volume exceeds double range; use log_cumulative_volume",
                                t);
        }
        return static_cast<double>(v);
    }
    return quad::integrate([&profile](double s) { return profile.value(s); }, profile.t0(), t);
}

double log_cumulative_volume(const VolumeProfile& profile, double t) {
    if (t < profile.t0() - 1e-12) throw DomainError("log_cumulative_volume needs t >= t0");
    t = std::max(t, profile.t0());
    if (t == profile.t0()) return -kInf;
    if (profile.kind() == ProfileKind::tabulated && t > profile.domain_end() + 1e-12) {
        throw DomainError("t beyond tabulated domain");
    }
    if (profile.has_closed_form()) {
        const long double v = profile.closed_cumulative_l(t);
        if (!std::isfinite(static_cast<double>(logl(v)))) {
            throw OverflowError("cumulative volume exceeds extended range", t);
        }
        return static_cast<double>(logl(v));
    }
    // Segment-wise scaled quadrature accumulated with log-sum-exp; stable
    // for profiles whose magnitude spans many decades.
    const int segments = 64;
    const double h = (t - profile.t0()) / segments;
    double acc = -kInf;
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    for (int i = 0; i < segments; ++i) {
        const double a = profile.t0() + i * h;
        const double b = a + h;
        const double m = std::max({profile.log_value(std::max(a, profile.t0() + 1e-12 * h)),
                                   profile.log_value(0.5 * (a + b)), profile.log_value(b)});
        if (m == -kInf) continue;
        const double scaled = quad::integrate(
            [&profile, m](double s) {
                const double lv = profile.log_value(s);
                return lv == -kInf ? 0.0 : std::exp(lv - m);
            },
            a, b, opt);
        if (scaled > 0.0) acc = log_add_exp(acc, m + std::log(scaled));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// growth exponent

GrowthReport growth_exponent(const VolumeProfile& profile, double t_max) {
    if (!(t_max > profile.t0() + 1.0)) {
        throw ParameterError("growth_exponent needs t_max > t0 + 1");
    }
    if (profile.kind() == ProfileKind::tabulated && t_max > profile.domain_end() + 1e-12) {
        throw ParameterError("growth_exponent window beyond tabulated domain");
    }
    const double lo = std::max(0.5 * t_max, profile.t0() + 0.05 * (t_max - profile.t0()));
    if (!(t_max - lo >= 1.0)) {
        throw ParameterError("growth_exponent fit window shorter than 1");
    }

    const int n = 128;
    double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
    std::vector<double> ts(n), ys(n);
    for (int i = 0; i < n; ++i) {
        const double t = lo + (t_max - lo) * i / (n - 1.0);
        const double y = log_cumulative_volume(profile, t);
        ts[i] = t;
        ys[i] = y;
        sum_t += t;
        sum_y += y;
        sum_tt += t * t;
        sum_ty += t * y;
    }
    const double denom = n * sum_tt - sum_t * sum_t;
    const double slope = (n * sum_ty - sum_t * sum_y) / denom;
    const double intercept = (sum_y - slope * sum_t) / n;

    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - (intercept + slope * ts[i]);
        rss += r * r;
    }

    GrowthReport rep;
    rep.theta_estimate = slope;
    rep.fit_lo = lo;
    rep.fit_hi = t_max;
    rep.residual = std::sqrt(rss / n);
    rep.analytic = profile.analytic_theta();
    return rep;
}

bool volume_divergent(const VolumeProfile& profile) {
    const double t_ref = std::max(1.0, profile.t0() + 1.0);
    double t_top = 64.0 * t_ref;
    if (std::isfinite(profile.domain_end())) t_top = std::min(t_top, profile.domain_end());
    if (!(t_top > profile.t0() + 2.0)) return false;

    std::vector<double> ts;
    for (double t = t_top; t > profile.t0() + 1e-9 && ts.size() < 7; t *= 0.5) ts.push_back(t);
    std::reverse(ts.begin(), ts.end());
    if (ts.size() < 3) return false;

    std::vector<double> lv(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) lv[i] = log_cumulative_volume(profile, ts[i]);
    // divergent iff the final doubling still grows the volume by >= 10%
    const double last_increment = lv[lv.size() - 1] - lv[lv.size() - 2];
    return last_increment >= std::log(1.1);
}

void require_infinite_volume(const VolumeProfile& profile) {
    if (!volume_divergent(profile)) {
        throw HypothesisViolation(
            "hypothesis violated: infinite volume (integral of v over [t0, inf) = +inf) "
            "is not verifiable for profile " + profile.describe(),
            "infinite volume");
    }
}

// ---------------------------------------------------------------------------
// Ricci decay

RicciDecayProfile::RicciDecayProfile(std::function<double(double)> k, int dimension)
    : k_(std::move(k)), n_(dimension) {
    if (n_ < 2) throw ParameterError("Ricci decay profile needs dimension >= 2");
    double prev = kInf;
    for (int i = 0; i <= 64; ++i) {
        const double s = 0.25 * i * i;  // quadratic spacing out to s = 1024
        const double v = k_(s);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("decay envelope k(s) must be finite and >= 0");
        }
        if (v > prev * (1.0 + 1e-12) + 1e-300) {
            throw DomainError("decay envelope k(s) must be nonincreasing; violated near s = " +
                              std::to_string(s));
        }
        prev = v;
    }
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    try {
        b0_ = quad::integrate_to_infinity([this](double s) { return s * k_(s); }, 0.0, opt).value;
    } catch (const DomainError&) {
        throw DomainError("moment integral b0 = int_0^inf s k(s) ds diverges (b0 = +inf); "
                          "volume bound unavailable");
    }
}

double ricci_volume_bound(const RicciDecayProfile& decay, double r) {
    if (!(r > 0.0)) throw DomainError("ricci_volume_bound needs r > 0");
    return std::exp(decay.b0()) * std::pow(r, decay.dimension());
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::ordered_json VolumeProfile::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind_);
    j["t0"] = t0_;
    nlohmann::ordered_json params;
    switch (kind_) {
        case ProfileKind::constant: params["value"] = amplitude_; break;
        case ProfileKind::power:
        case ProfileKind::exponential:
            params["A"] = amplitude_;
            params["c"] = rate_;
            break;
        case ProfileKind::model_manifold:
            params["n"] = n_;
            params["kappa"] = kappa_;
            break;
        case ProfileKind::tabulated: {
            params["rows"] = table_->size();
            params["t_min"] = table_->x_front();
            params["t_max"] = table_->x_back();
            std::string blob;
            const int probes = 16;
            for (int i = 0; i <= probes; ++i) {
                const double t =
                    table_->x_front() + (table_->x_back() - table_->x_front()) * i / probes;
                blob += fmt_double((*table_)(t), 17) + ";";
            }
            params["fingerprint"] = hex64(fnv1a64(blob));
            break;
        }
    }
    j["params"] = params;
    return j;
}

std::string VolumeProfile::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(";
    switch (kind_) {
        case ProfileKind::constant: os << "value=" << amplitude_; break;
        case ProfileKind::power:
        case ProfileKind::exponential: os << "A=" << amplitude_ << ",c=" << rate_; break;
        case ProfileKind::model_manifold: os << "n=" << n_ << ",kappa=" << kappa_; break;
        case ProfileKind::tabulated:
            os << "rows=" << table_->size() << ",t=[" << table_->x_front() << ","
               << table_->x_back() << "]";
            break;
    }
    if (t0_ != 0.0) os << ",t0=" << t0_;
    os << ")";
    return os.str();
}

VolumeProfile VolumeProfile::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw UsageError("profile JSON needs an object with a 'kind' field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    const double t0 = j.value("t0", 0.0);
    if (kind == "constant") {
        return constant(params.value("value", 1.0), t0);
    }
    if (kind == "power") {
        return power(params.value("A", 1.0), params.value("c", 1.0), t0);
    }
    if (kind == "exponential") {
        return exponential(params.value("A", 1.0), params.value("c", 1.0), t0);
    }
    if (kind == "model_manifold") {
        if (!params.contains("n") || !params.contains("kappa")) {
            throw UsageError("model_manifold profile needs params n and kappa");
        }
        return model_manifold_profile(params.at("n").get<int>(), params.at("kappa").get<double>());
    }
    if (kind == "tabulated") {
        if (params.contains("path")) {
            std::ifstream in(params.at("path").get<std::string>());
            if (!in) throw UsageError("cannot open table file " + params.at("path").get<std::string>());
            return from_csv(in);
        }
        if (params.contains("t") && params.contains("v")) {
            return tabulated(params.at("t").get<std::vector<double>>(),
                             params.at("v").get<std::vector<double>>());
        }
        throw UsageError("tabulated profile needs params.path or params.t/params.v");
    }
    throw UsageError("unknown profile kind '" + kind + "'");
}

VolumeProfile VolumeProfile::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw UsageError("empty profile CSV");
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    if (strip(line) != "t,v") throw UsageError("profile CSV must start with header 't,v'");
    std::vector<double> ts, vs;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("bad CSV row: " + line);
        ts.push_back(parse_number(strip(line.substr(0, comma))));
        vs.push_back(parse_number(strip(line.substr(comma + 1))));
    }
    return tabulated(std::move(ts), std::move(vs));
}

VolumeProfile VolumeProfile::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open profile file " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        return from_csv(in);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("cannot parse profile file " + path + ": " + e.what());
    }
    return from_json(j);
}

VolumeProfile VolumeProfile::from_spec_string(const std::string& spec) {
    if (spec.empty()) throw UsageError("empty profile spec");
    if (spec.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("cannot parse inline profile JSON: ") + e.what());
        }
        return from_json(j);
    }
    const bool looks_like_file = spec.size() >= 5 && (spec.substr(spec.size() - 5) == ".json" ||
                                                      spec.substr(spec.size() - 4) == ".csv");
    if (looks_like_file || (spec.size() >= 4 && spec.substr(spec.size() - 4) == ".csv")) {
        return from_file(spec);
    }
    // kind[:key=val,key=val,...]
    std::string kind = spec;
    nlohmann::json params = nlohmann::json::object();
    double t0 = 0.0;
    bool has_t0 = false;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        kind = spec.substr(0, colon);
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("bad profile spec item '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            if (key == "t0") {
                t0 = parse_number(val);
                has_t0 = true;
            } else if (key == "path") {
                params[key] = val;
            } else if (key == "n") {
                params[key] = static_cast<int>(parse_number(val));
            } else {
                params[key] = parse_number(val);
            }
        }
    }
    nlohmann::json j;
    j["kind"] = kind;
    j["params"] = params;
    if (has_t0) j["t0"] = t0;
    return from_json(j);
}

}  // namespace halflin
