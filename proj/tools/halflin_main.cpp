// Command-line laboratory for the half-linear Liouville equation: oscillation
// scans, Riccati checks, Rayleigh-quotient sweeps, and growth-exponent
// eigenvalue bounds, with reproducible CSV/JSON output.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halflin/core.hpp"
#include "halflin/criteria.hpp"
#include "halflin/ode.hpp"
#include "halflin/profiles.hpp"
#include "halflin/riccati.hpp"
#include "halflin/spectral.hpp"
#include "halflin/util.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct RawOpts {
    std::optional<std::string> config;
    std::optional<std::string> profile;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<double> p, lambda, t_start, horizon, rtol, atol, t_max, y0, x0, xprime0;
    std::optional<std::vector<double>> lambda_grid;
    std::optional<int> min_zeros, resample;
    bool riccati_flag = false;
};

struct Config {
    std::string command;
    std::string profile_spec;
    double p = 2.0;
    double lambda = 1.0;
    std::vector<double> lambda_grid;
    std::optional<double> t_start;  // default: profile t0 (pushed inside when v(t0) = 0)
    double horizon = 100.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    std::string format;  // "json" or "csv"
    std::string out = "-";
    int min_zeros = 2;
    std::optional<double> t_max;  // growth-exponent window end; default horizon
    int resample = 0;
    bool riccati_column = false;
    double y0 = 1.0;
    double x0 = 0.0;
    double xprime0 = 1.0;

    ordered_json to_json() const {
        ordered_json j;
        j["command"] = command;
        j["profile"] = profile_spec;
        j["p"] = p;
        j["lambda"] = lambda;
        j["lambda_grid"] = lambda_grid;
        j["t_start"] = t_start ? ordered_json(*t_start) : ordered_json(nullptr);
        j["horizon"] = horizon;
        j["rtol"] = rtol;
        j["atol"] = atol;
        j["format"] = format;
        j["out"] = out;
        j["min_zeros"] = min_zeros;
        j["t_max"] = t_max ? ordered_json(*t_max) : ordered_json(nullptr);
        j["resample"] = resample;
        j["riccati_column"] = riccati_column;
        j["y0"] = y0;
        j["x0"] = x0;
        j["xprime0"] = xprime0;
        return j;
    }
};

void add_common_options(CLI::App* cmd, RawOpts& raw) {
    cmd->add_option("--config", raw.config, "JSON config file; flags override file values");
    cmd->add_option("--profile", raw.profile,
                    "profile spec: kind:key=val,... | file.json | file.csv | inline JSON");
    cmd->add_option("--p", raw.p, "exponent p > 1");
    cmd->add_option("--lambda", raw.lambda, "spectral parameter");
    cmd->add_option("--lambda-grid", raw.lambda_grid, "increasing positive lambda grid")
        ->delimiter(',');
    cmd->add_option("--t-start", raw.t_start, "start time (default: profile t0)");
    cmd->add_option("--horizon", raw.horizon, "end of the integration window");
    cmd->add_option("--rtol", raw.rtol, "integrator relative tolerance (default 1e-9)");
    cmd->add_option("--atol", raw.atol, "integrator absolute tolerance (default 1e-12)");
    cmd->add_option("--t-max", raw.t_max, "growth-exponent fit window end (default: horizon)");
    cmd->add_option("--format", raw.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", raw.out, "output path, '-' for stdout");
}

Config resolve(const std::string& command, const RawOpts& raw, const std::string& default_format) {
    Config cfg;
    cfg.command = command;
    cfg.format = default_format;
    cfg.horizon = command == "trace" ? 10.0 : 100.0;

    if (raw.config) {
        std::ifstream in(*raw.config);
        if (!in) throw halflin::UsageError("cannot open config file " + *raw.config);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw halflin::UsageError("cannot parse config file: " + std::string(e.what()));
        }
        if (j.contains("profile")) cfg.profile_spec = j["profile"].get<std::string>();
        if (j.contains("p")) cfg.p = j["p"].get<double>();
        if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
        if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
        if (j.contains("t_start") && !j["t_start"].is_null())
            cfg.t_start = j["t_start"].get<double>();
        if (j.contains("horizon")) cfg.horizon = j["horizon"].get<double>();
        if (j.contains("rtol")) cfg.rtol = j["rtol"].get<double>();
        if (j.contains("atol")) cfg.atol = j["atol"].get<double>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("min_zeros")) cfg.min_zeros = j["min_zeros"].get<int>();
        if (j.contains("t_max") && !j["t_max"].is_null()) cfg.t_max = j["t_max"].get<double>();
        if (j.contains("resample")) cfg.resample = j["resample"].get<int>();
        if (j.contains("riccati_column")) cfg.riccati_column = j["riccati_column"].get<bool>();
        if (j.contains("y0")) cfg.y0 = j["y0"].get<double>();
        if (j.contains("x0")) cfg.x0 = j["x0"].get<double>();
        if (j.contains("xprime0")) cfg.xprime0 = j["xprime0"].get<double>();
    }
    if (raw.profile) cfg.profile_spec = *raw.profile;
    if (raw.p) cfg.p = *raw.p;
    if (raw.lambda) cfg.lambda = *raw.lambda;
    if (raw.lambda_grid) cfg.lambda_grid = *raw.lambda_grid;
    if (raw.t_start) cfg.t_start = *raw.t_start;
    if (raw.horizon) cfg.horizon = *raw.horizon;
    if (raw.rtol) cfg.rtol = *raw.rtol;
    if (raw.atol) cfg.atol = *raw.atol;
    if (raw.format) cfg.format = *raw.format;
    if (raw.out) cfg.out = *raw.out;
    if (raw.min_zeros) cfg.min_zeros = *raw.min_zeros;
    if (raw.t_max) cfg.t_max = *raw.t_max;
    if (raw.resample) cfg.resample = *raw.resample;
    if (raw.riccati_flag) cfg.riccati_column = true;
    if (raw.y0) cfg.y0 = *raw.y0;
    if (raw.x0) cfg.x0 = *raw.x0;
    if (raw.xprime0) cfg.xprime0 = *raw.xprime0;

    if (cfg.profile_spec.empty()) throw halflin::UsageError("--profile is required");
    return cfg;
}

halflin::IntegrateOptions integrate_options(const Config& cfg) {
    halflin::IntegrateOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    return opt;
}

double default_t_start(const Config& cfg, const halflin::VolumeProfile& profile) {
    if (cfg.t_start) return *cfg.t_start;
    // start strictly inside the domain when v vanishes at the boundary
    if (profile.log_value(profile.t0()) > -700.0) return profile.t0();
    return profile.t0() + 1.0;
}

class OutputSink {
public:
    explicit OutputSink(const std::string& path) : path_(path) {
        if (path_ != "-") {
            file_.open(path_);
            if (!file_) throw halflin::UsageError("cannot open output file " + path_);
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

private:
    std::string path_;
    std::ofstream file_;
};

std::string config_hash(const Config& cfg) {
    return halflin::hex64(halflin::fnv1a64(cfg.to_json().dump()));
}

void emit_json(const Config& cfg, const ordered_json& result) {
    ordered_json doc;
    doc["command"] = cfg.command;
    doc["config"] = cfg.to_json();
    doc["config_hash"] = config_hash(cfg);
    doc["result"] = result;
    OutputSink sink(cfg.out);
    sink.stream() << doc.dump(2) << '\n';
}

void emit_csv_header(std::ostream& os, const Config& cfg) {
    os << "# halflin " << cfg.command << '\n';
    os << "# config " << cfg.to_json().dump() << '\n';
    os << "# config_hash " << config_hash(cfg) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_oscillate(const Config& cfg) {
    using namespace halflin;
    const VolumeProfile profile = VolumeProfile::from_spec_string(cfg.profile_spec);
    const HalfLinearParams params = HalfLinearParams::make(cfg.p, cfg.lambda);
    const double t_start = default_t_start(cfg, profile);
    const double t_max = cfg.t_max.value_or(cfg.horizon);

    const OscillationReport report = oscillation_evidence(
        params, profile, t_start, cfg.horizon, cfg.min_zeros, integrate_options(cfg));

    std::vector<CriterionPrediction> predictions;
    std::optional<std::string> hypothesis_note;
    try {
        predictions.push_back(theorem1_predict(profile, cfg.p, cfg.lambda, t_max));
    } catch (const HypothesisViolation& e) {
        hypothesis_note = e.what();
    }
    if (cfg.lambda > 0.0) {
        predictions.push_back(leighton_wintner_check(profile, cfg.p, cfg.lambda, cfg.horizon));
    }

    bool any_oscillatory = false;
    ordered_json preds = ordered_json::array();
    for (const auto& pred : predictions) {
        ordered_json pj = to_json(pred);
        pj["consistency"] = to_string(cross_validate(pred, report));
        preds.push_back(std::move(pj));
        if (pred.predicted == Predicted::oscillatory) any_oscillatory = true;
    }
    const Consistency overall =
        !any_oscillatory ? Consistency::UNINFORMATIVE
                         : (report.verdict == Verdict::oscillatory_evidence
                                ? Consistency::CONSISTENT
                                : Consistency::HORIZON_LIMITED);

    ordered_json rep;
    rep["verdict"] = to_string(report.verdict);
    rep["zero_count"] = report.zeros.size();
    rep["zeros"] = report.zeros;
    rep["min_zeros_required"] = report.min_zeros_required;
    rep["t_start"] = report.t_start;
    rep["horizon"] = report.horizon;
    if (!report.tangential_warnings.empty())
        rep["tangential_warnings"] = report.tangential_warnings;
    if (report.error_note) {
        rep["error_note"] = *report.error_note;
        rep["reached_t"] = *report.reached_t;
    }

    ordered_json result;
    result["report"] = std::move(rep);
    result["predictions"] = std::move(preds);
    if (hypothesis_note) result["hypothesis_note"] = *hypothesis_note;
    result["consistency"] = to_string(overall);

    if (cfg.format == "json") {
        emit_json(cfg, result);
    } else {
        OutputSink sink(cfg.out);
        emit_csv_header(sink.stream(), cfg);
        sink.stream() << "# verdict," << to_string(report.verdict) << '\n';
        sink.stream() << "# consistency," << to_string(overall) << '\n';
        sink.stream() << "zero\n";
        for (double z : report.zeros) sink.stream() << halflin::fmt_double(z) << '\n';
    }
    return overall == Consistency::HORIZON_LIMITED ? 2 : 0;
}

int cmd_bound(const Config& cfg) {
    using namespace halflin;
    const VolumeProfile profile = VolumeProfile::from_spec_string(cfg.profile_spec);
    const double t_max = cfg.t_max.value_or(std::max(cfg.horizon, 100.0));

    const GrowthReport growth = growth_exponent(profile, t_max);
    const SpectralBound tb = theta_upper_bound(profile, cfg.p, t_max);
    const SpectralBound eb = essential_bound(profile, cfg.p, t_max);

    ordered_json gj;
    gj["estimate"] = growth.theta_estimate;
    gj["fit_window"] = {growth.fit_lo, growth.fit_hi};
    gj["residual"] = growth.residual;
    gj["analytic"] = growth.analytic ? ordered_json(*growth.analytic) : ordered_json(nullptr);

    ordered_json result;
    result["theta"] = std::move(gj);
    result["theta_bound"] = to_json(tb);
    result["essential_bound"] = to_json(eb);

    if (cfg.format == "json") {
        emit_json(cfg, result);
    } else {
        OutputSink sink(cfg.out);
        emit_csv_header(sink.stream(), cfg);
        sink.stream() << "kind,value,beta,p\n";
        for (const auto* b : {&tb, &eb}) {
            sink.stream() << to_string(b->kind) << ',' << fmt_double(b->value) << ','
                          << fmt_double(b->beta) << ',' << fmt_double(b->p) << '\n';
        }
    }
    return 0;
}

int cmd_sweep(const Config& cfg) {
    using namespace halflin;
    const VolumeProfile profile = VolumeProfile::from_spec_string(cfg.profile_spec);
    if (cfg.lambda_grid.empty()) throw UsageError("sweep needs a nonempty --lambda-grid");
    const double t_start = default_t_start(cfg, profile);

    const SweepResult sweep = bound_witness_sweep(profile, cfg.p, cfg.lambda_grid, t_start,
                                                  cfg.horizon, integrate_options(cfg));
    if (cfg.format == "json") {
        emit_json(cfg, sweep_to_json(sweep));
    } else {
        OutputSink sink(cfg.out);
        emit_csv_header(sink.stream(), cfg);
        write_sweep_csv(sink.stream(), sweep);
    }
    for (const auto& row : sweep.rows) {
        if (row.zero_pair || row.note.empty()) return 0;  // at least one row succeeded
    }
    return 1;
}

int cmd_trace(const Config& cfg) {
    using namespace halflin;
    const VolumeProfile profile = VolumeProfile::from_spec_string(cfg.profile_spec);
    const HalfLinearParams params = HalfLinearParams::make(cfg.p, cfg.lambda);
    const double t_start = default_t_start(cfg, profile);

    const Trajectory traj = integrate_halflinear(params, profile, cfg.x0, cfg.xprime0,
                                                 {t_start, cfg.horizon}, integrate_options(cfg));

    OutputSink sink(cfg.out);
    std::ostream& os = sink.stream();
    emit_csv_header(os, cfg);

    std::vector<TrajectorySample> rows;
    if (cfg.resample > 1) {
        rows = resample_trajectory(traj, traj.t_start, traj.t_end,
                                   static_cast<std::size_t>(cfg.resample));
    } else {
        rows = traj.samples;
    }

    const long double pm1 = params.p() - 1.0L;
    const long double qm1 = params.q() - 1.0L;
    os << (cfg.riccati_column ? "t,x,w,y\n" : "t,x,w\n");
    for (const auto& s : rows) {
        const long double scale = expl(static_cast<long double>(s.log_scale));
        const long double wscale = expl(pm1 * static_cast<long double>(s.log_scale));
        os << fmt_double(s.t) << ',' << fmt_long_double(s.x * scale) << ','
           << fmt_long_double(s.w * wscale);
        if (cfg.riccati_column) {
            // substitution value on zero-free stretches; blank near zeros of x
            const long double v = profile.value_l(s.t);
            const long double env = fabsl(s.x) + fabsl(signed_pow_l(s.w / v, qm1));
            os << ',';
            if (fabsl(s.x) > 1e-8L * env) {
                const long double y = -s.w / signed_pow_l(s.x, pm1);
                os << fmt_long_double(y);
            }
        }
        os << '\n';
    }
    return 0;
}

int cmd_riccati_check(const Config& cfg) {
    using namespace halflin;
    const VolumeProfile profile = VolumeProfile::from_spec_string(cfg.profile_spec);
    const HalfLinearParams params = HalfLinearParams::make(cfg.p, cfg.lambda);
    const double t_start = default_t_start(cfg, profile);

    const RiccatiTrajectory rt = integrate_riccati(params, profile, cfg.y0,
                                                   {t_start, cfg.horizon}, integrate_options(cfg));
    const GrowthBoundReport rep = growth_bound_check(rt, params, t_start);

    ordered_json result;
    result["T"] = rep.T_used;
    result["y_at_T"] = rep.y_at_T;
    result["samples_checked"] = rep.samples_checked;
    result["growth_bound_holds"] = rep.growth_holds;
    result["young_step_holds"] = rep.young_holds;
    result["worst_growth_margin"] = rep.worst_growth_margin;
    result["worst_young_margin"] = rep.worst_young_margin;
    if (rep.first_violation_t) result["first_violation_t"] = *rep.first_violation_t;
    result["blow_up"] = rt.blow_up ? blow_up_to_json(*rt.blow_up) : ordered_json(nullptr);
    result["case"] = to_string(case_classification(profile, cfg.p, cfg.horizon));

    if (cfg.format == "json") {
        emit_json(cfg, result);
    } else {
        OutputSink sink(cfg.out);
        emit_csv_header(sink.stream(), cfg);
        write_riccati_csv(sink.stream(), rt);
    }
    return (rep.growth_holds && rep.young_holds) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "halflin: half-linear oscillation and p-Laplacian bound laboratory.\n"
        "Default tolerances: integrator rtol 1e-9 / atol 1e-12, zero refinement 1e-10,\n"
        "quadrature abs 1e-10 / rel 1e-9. The resolved config is echoed into every output."};
    app.require_subcommand(1);

    RawOpts raw;
    auto* oscillate = app.add_subcommand(
        "oscillate", "integrate from the canonical IC, detect zeros, compare with criteria");
    add_common_options(oscillate, raw);
    oscillate->add_option("--min-zeros", raw.min_zeros, "zeros required for evidence (default 2)");

    auto* bound = app.add_subcommand(
        "bound", "growth exponent and the beta^p/p^p eigenvalue upper bounds");
    add_common_options(bound, raw);

    auto* sweep = app.add_subcommand(
        "sweep", "Rayleigh-quotient witness table over a lambda grid plus threshold bisection");
    add_common_options(sweep, raw);

    auto* trace = app.add_subcommand("trace", "export a trajectory as plot-ready CSV");
    add_common_options(trace, raw);
    trace->add_option("--x0", raw.x0, "initial x (default 0)");
    trace->add_option("--xprime0", raw.xprime0, "initial x' (default 1)");
    trace->add_option("--resample", raw.resample, "uniform resampling node count (0 = native)");
    trace->add_flag("--riccati", raw.riccati_flag, "append substitution column y = -w/phi(x)");

    auto* rcheck = app.add_subcommand(
        "riccati-check", "integrate the Riccati equation and verify the growth/Young bounds");
    add_common_options(rcheck, raw);
    rcheck->add_option("--y0", raw.y0, "initial Riccati value (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (oscillate->parsed()) return cmd_oscillate(resolve("oscillate", raw, "json"));
        if (bound->parsed()) return cmd_bound(resolve("bound", raw, "json"));
        if (sweep->parsed()) return cmd_sweep(resolve("sweep", raw, "csv"));
        if (trace->parsed()) return cmd_trace(resolve("trace", raw, "csv"));
        if (rcheck->parsed()) return cmd_riccati_check(resolve("riccati-check", raw, "json"));
    } catch (const halflin::HypothesisViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
