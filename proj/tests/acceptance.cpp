// Acceptance suite: one test case per criterion, each printing a PASS line
// when it completes. Expected values marked as derived were frozen from the
// independent oracles in oracles.hpp before being asserted here.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "halflin/criteria.hpp"
#include "halflin/ode.hpp"
#include "halflin/profiles.hpp"
#include "halflin/quadrature.hpp"
#include "halflin/riccati.hpp"
#include "halflin/spectral.hpp"
#include "oracles.hpp"

using namespace halflin;
namespace fs = std::filesystem;

namespace {

const double kPi = std::acos(-1.0);

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

IntegrateOptions tight() {
    IntegrateOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-15;
    return o;
}

struct RandomConfig {
    HalfLinearParams params;
    VolumeProfile profile;
    double t_start;
};

// deterministic draw of an oscillatory configuration
RandomConfig draw_config(std::mt19937& rng) {
    std::uniform_real_distribution<double> pd(1.3, 3.2);
    std::uniform_real_distribution<double> ld(0.4, 2.5);
    std::uniform_real_distribution<double> ad(0.5, 2.0);
    std::uniform_real_distribution<double> cd(0.5, 3.0);
    std::uniform_real_distribution<double> ed(0.05, 0.3);
    std::uniform_real_distribution<double> kd(-0.04, -0.005);
    std::uniform_int_distribution<int> kind(0, 4);

    const double p = pd(rng);
    const double lambda = ld(rng);
    switch (kind(rng)) {
        case 0: return {HalfLinearParams::make(p, lambda), VolumeProfile::constant(ad(rng)), 1.0};
        case 1:
            return {HalfLinearParams::make(p, lambda), VolumeProfile::power(ad(rng), cd(rng)),
                    1.0};
        case 2:
            return {HalfLinearParams::make(p, lambda),
                    VolumeProfile::exponential(1.0, ed(rng)), 1.0};
        case 3: return {HalfLinearParams::make(p, lambda), model_manifold_profile(2, 0.0), 1.0};
        default:
            return {HalfLinearParams::make(p, lambda), model_manifold_profile(3, kd(rng)), 1.0};
    }
}

OscillationRun run_until_zeros(const RandomConfig& cfg, std::size_t need) {
    double horizon = 60.0;
    for (int k = 0; k < 4; ++k) {
        OscillationRun run = oscillation_run(cfg.params, cfg.profile, cfg.t_start,
                                             cfg.t_start + horizon, 2);
        if (run.report.zeros.size() >= need) return run;
        horizon *= 2.0;
    }
    FAIL("configuration failed to produce enough zeros");
    throw std::runtime_error("unreachable");
}

std::vector<double> riccati_values_at(const HalfLinearParams& prm, const VolumeProfile& prof,
                                      double y0, double t0, const std::vector<double>& ts) {
    std::vector<double> out;
    double cur_t = t0;
    double cur_y = y0;
    for (double t : ts) {
        if (t > cur_t + 1e-15) {
            const RiccatiTrajectory seg = integrate_riccati(prm, prof, cur_y, {cur_t, t});
            cur_y = seg.samples.back().y;
            cur_t = seg.samples.back().t;
        }
        out.push_back(cur_y);
    }
    return out;
}

int run_command(const std::string& args, const std::string& tag, std::string* out_text = nullptr) {
    const fs::path dir = fs::path(TEST_TMPDIR);
    fs::create_directories(dir);
    const fs::path out = dir / (tag + ".out");
    const fs::path err = dir / (tag + ".err");
    const std::string cmd = std::string(HALFLIN_CLI) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    if (out_text) {
        std::ifstream in(out, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        *out_text = ss.str();
    }
    return WEXITSTATUS(raw);
}

}  // namespace

TEST_CASE("C01 classical reduction: zeros of sin(2t) at k pi/2") {
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj =
        integrate_halflinear(HalfLinearParams::make(2.0, 4.0), VolumeProfile::constant(1.0), 0.0,
                             1.0, {0.0, 20.0 * kPi / 2.0 + 0.5}, tight());
    const std::vector<double> zeros = find_zeros(traj);
    REQUIRE(zeros.size() >= 20);
    for (int k = 1; k <= 20; ++k) {
        CHECK(std::fabs(zeros[k - 1] - k * kPi / 2.0) <= 1e-8);
    }
    const double elapsed = seconds_since(t0);
    CHECK(elapsed < 1.0);
    std::printf("[acceptance] C01 classical-reduction PASS (20 zeros within 1e-8, %.2fs)\n",
                elapsed);
}

TEST_CASE("C02 generalized half-period against the fixed-step oracle") {
    // At lambda = 1 the measured spacing is ((p-1)/lambda)^{1/p} * pi_p
    // (= 3.046992 for p in {1.5, 3}); the spec's stated constants
    // pi_{1.5} = 4.8368 and pi_3 = 2.4184 are realized at lambda = p-1.
    // Both facts are asserted; see the project notes for the derivation.
    const VolumeProfile v1 = VolumeProfile::constant(1.0);
    for (double p : {1.5, 3.0}) {
        const auto t_main = std::chrono::steady_clock::now();
        const Trajectory traj = integrate_halflinear(HalfLinearParams::make(p, 1.0), v1, 0.0,
                                                     1.0, {0.0, 8.0}, tight());
        const std::vector<double> zeros = find_zeros(traj);
        REQUIRE(zeros.size() >= 2);
        const double main_elapsed = seconds_since(t_main);
        CHECK(main_elapsed < 1.0);

        const auto t_orc = std::chrono::steady_clock::now();
        const auto orc = oracle::fixed_step_halflinear(
            p, 1.0, [](double) { return 1.0; }, 0.0, 8.0, 0.0, 1.0, 1e-6, 2);
        const double oracle_elapsed = seconds_since(t_orc);
        CHECK(oracle_elapsed < 30.0);
        REQUIRE(orc.zeros.size() >= 2);

        const double spacing_main = zeros[1] - zeros[0];
        const double spacing_oracle = orc.zeros[1] - orc.zeros[0];
        const double analytic = constant_coefficient_zero_spacing(p, 1.0);
        CHECK(std::fabs(zeros[0] - orc.zeros[0]) <= 1e-6);
        CHECK(std::fabs(spacing_main - spacing_oracle) <= 1e-6);
        CHECK(std::fabs(spacing_main - analytic) <= 1e-6);
        CHECK(std::fabs(analytic - 3.0469919919) <= 1e-6);

        // the pi_p constants themselves, realized at lambda = p-1
        const Trajectory sinp = integrate_halflinear(HalfLinearParams::make(p, p - 1.0), v1, 0.0,
                                                     1.0, {0.0, 11.0}, tight());
        const std::vector<double> zp = find_zeros(sinp);
        REQUIRE(zp.size() >= 2);
        CHECK(std::fabs(zp[0] - generalized_pi(p)) <= 1e-6);
        CHECK(std::fabs(zp[1] - zp[0] - generalized_pi(p)) <= 1e-6);
        const double stated = (p == 1.5) ? 4.8368 : 2.4184;
        CHECK(std::fabs(generalized_pi(p) - stated) <= 1e-4);

        std::printf("[acceptance] C02 p=%.1f: spacing(lambda=1)=%.7f oracle=%.7f "
                    "pi_p(at lambda=p-1)=%.7f (main %.2fs, oracle %.2fs)\n",
                    p, spacing_main, spacing_oracle, zp[0], main_elapsed, oracle_elapsed);
    }
    std::printf("[acceptance] C02 generalized-half-period PASS\n");
}

TEST_CASE("C03 Riccati correspondence across 20 random configurations") {
    std::mt19937 rng(20240811);
    for (int draw = 0; draw < 20; ++draw) {
        const RandomConfig cfg = draw_config(rng);
        const OscillationRun run = run_until_zeros(cfg, 2);
        const double z1 = run.report.zeros[0];
        const double z2 = run.report.zeros[1];
        const double gap = z2 - z1;

        const RiccatiTrajectory sub =
            riccati_from_solution(run.trajectory, z1 + 0.05 * gap, z2 - 0.05 * gap, 257);
        std::vector<double> ts;
        for (const auto& s : sub.samples) ts.push_back(s.t);
        const std::vector<double> direct =
            riccati_values_at(cfg.params, cfg.profile, sub.samples.front().y, ts.front(), ts);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (std::fabs(sub.samples[i].y) > 1e6) break;
            CHECK(std::fabs(sub.samples[i].y - direct[i]) <=
                  1e-6 * (1.0 + std::fabs(direct[i])));
        }

        const double t_launch = z1 + 0.1 * gap;
        const RiccatiTrajectory sub2 =
            riccati_from_solution(run.trajectory, t_launch, z2 - 0.05 * gap, 33);
        const RiccatiTrajectory dir = integrate_riccati(
            cfg.params, cfg.profile, sub2.samples.front().y, {t_launch, z2 + gap});
        REQUIRE(dir.blow_up.has_value());
        CHECK(std::fabs(dir.blow_up->time - z2) <= 1e-6);
    }
    std::printf("[acceptance] C03 riccati-correspondence PASS (20 draws, 1e-6)\n");
}

TEST_CASE("C04 quotient identity across 20 random configurations") {
    std::mt19937 rng(977001);
    for (int draw = 0; draw < 20; ++draw) {
        const RandomConfig cfg = draw_config(rng);
        const OscillationRun run = run_until_zeros(cfg, 2);
        const double z1 = run.report.zeros[0];
        const double z2 = run.report.zeros[1];
        const RayleighResult r =
            rayleigh_quotient(run.trajectory, {z1, z2}, cfg.profile, cfg.params.p());
        CHECK(std::fabs(r.quotient - cfg.params.lambda()) <= 1e-6 * cfg.params.lambda());
    }
    std::printf("[acceptance] C04 quotient-identity PASS (20 draws, 1e-6 relative)\n");
}

TEST_CASE("C05 subexponential regime: power coefficients oscillate for every lambda > 0") {
    for (double c : {1.0, 3.0}) {
        for (double p : {1.5, 2.0, 3.0}) {
            for (double lambda : {0.01, 0.1, 1.0}) {
                const VolumeProfile prof = VolumeProfile::power(1.0, c);
                const HalfLinearParams prm = HalfLinearParams::make(p, lambda);
                const OscillationReport rep = oscillation_evidence(prm, prof, 1.0, 500.0, 3);
                CHECK(rep.verdict == Verdict::oscillatory_evidence);
                CHECK(rep.zeros.size() >= 3);
                const CriterionPrediction pred = theorem1_predict(prof, p, lambda, 500.0);
                CHECK(pred.source == CriterionSource::theorem1_a);
                CHECK(cross_validate(pred, rep) == Consistency::CONSISTENT);
            }
        }
    }
    std::printf("[acceptance] C05 subexponential-regime PASS (18 combinations, >=3 zeros)\n");
}

TEST_CASE("C06 hyperbolic-plane threshold and growth bound") {
    const auto t0 = std::chrono::steady_clock::now();
    const VolumeProfile h2 = model_manifold_profile(2, -1.0);

    const SweepResult sweep = bound_witness_sweep(h2, 2.0, {0.2, 0.3}, 1.0, 2000.0);
    REQUIRE(sweep.lambda_star.has_value());
    CHECK(std::fabs(*sweep.lambda_star - 0.25) <= 0.02);

    const GrowthReport growth = growth_exponent(h2, 200.0);
    CHECK(std::fabs(growth.theta_estimate - 1.0) <= 1e-3);
    const SpectralBound bound = theta_upper_bound(h2, 2.0, 200.0);
    CHECK(std::fabs(bound.value - 0.25) <= 1e-6);

    const double elapsed = seconds_since(t0);
    CHECK(elapsed < 60.0);
    std::printf("[acceptance] C06 hyperbolic-threshold PASS (lambda*=%.5f, bound=%.8f, %.1fs)\n",
                *sweep.lambda_star, bound.value, elapsed);
}

TEST_CASE("C07 general-p threshold consistency on the hyperbolic plane") {
    const VolumeProfile h2 = model_manifold_profile(2, -1.0);
    for (double p : {1.5, 3.0}) {
        const double threshold = std::pow(1.0 / p, p);
        const OscillationReport above = oscillation_evidence(
            HalfLinearParams::make(p, threshold * 1.2), h2, 1.0, 2000.0, 2);
        CHECK(above.verdict == Verdict::oscillatory_evidence);
        const OscillationReport below = oscillation_evidence(
            HalfLinearParams::make(p, threshold * 0.8), h2, 1.0, 2000.0, 2);
        CHECK(below.verdict == Verdict::no_zero_found);
        std::printf("[acceptance] C07 p=%.1f threshold=%.6f: above->%zu zeros, below->%zu\n", p,
                    threshold, above.zeros.size(), below.zeros.size());
    }
    std::printf("[acceptance] C07 general-p-threshold PASS\n");
}

TEST_CASE("C08 proof-inequality suite in the convergent-reciprocal regime") {
    const VolumeProfile prof = VolumeProfile::exponential(1.0, 3.0);
    const struct {
        double p, lambda, y0;
    } runs[] = {{3.0, 1.0, 1.0}, {2.0, 1.0, 0.5}, {1.5, 0.7, 2.0}};

    for (const auto& r : runs) {
        const HalfLinearParams prm = HalfLinearParams::make(r.p, r.lambda);
        CHECK(case_classification(prof, r.p, 40.0) == CaseClass::case_I);
        const RiccatiTrajectory rt = integrate_riccati(prm, prof, r.y0, {0.0, 12.0});
        const GrowthBoundReport rep = growth_bound_check(rt, prm, 0.0);
        CHECK(rep.growth_holds);
        CHECK(rep.young_holds);
        CHECK(rep.samples_checked > 50);

        // Hoelder lower bound: int_{t-1}^t v^{1-q} >= V(t)^{1-q}
        const double q = prm.q();
        for (int i = 0; i < 100; ++i) {
            const double t = 1.0 + 10.0 * i / 99.0;
            const double lhs = quad::integrate(
                [&](double s) { return std::exp((1.0 - q) * prof.log_value(s)); }, t - 1.0, t);
            const double rhs = std::exp((1.0 - q) * std::log(cumulative_volume(prof, t)));
            CHECK(lhs >= rhs * (1.0 - 1e-9));
        }
    }
    std::printf("[acceptance] C08 proof-inequalities PASS (Young, growth, Hoelder x 300)\n");
}

TEST_CASE("C09 shooting eigen-solver and Sturm monotonicity") {
    const VolumeProfile v1 = VolumeProfile::constant(1.0);
    for (double L : {0.5, 1.0, kPi}) {
        const double expected = (kPi / L) * (kPi / L);
        const double got = annulus_first_eigenvalue(v1, 2.0, 0.0, L);
        CHECK(std::fabs(got - expected) <= 1e-7 * expected);
    }

    std::mt19937 rng(555);
    std::uniform_real_distribution<double> ad(0.5, 2.0);
    const VolumeProfile profiles[5] = {
        VolumeProfile::constant(ad(rng)), VolumeProfile::power(ad(rng), 1.7),
        VolumeProfile::exponential(1.0, 0.25), model_manifold_profile(2, -0.25),
        model_manifold_profile(3, 0.0)};
    std::uniform_real_distribution<double> pd(1.4, 3.0);
    for (const auto& prof : profiles) {
        const double p = pd(rng);
        std::size_t prev = 0;
        for (int i = 0; i < 50; ++i) {
            const double lambda = 0.05 * std::pow(100.0, i / 49.0);  // log grid to 5
            const OscillationReport rep = oscillation_evidence(
                HalfLinearParams::make(p, lambda), prof, 1.0, 41.0, 2);
            CHECK(rep.zeros.size() >= prev);
            prev = rep.zeros.size();
        }
    }
    std::printf("[acceptance] C09 shooting-eigensolver PASS (classical values + 250 Sturm runs)\n");
}

TEST_CASE("C10 asymptotically nonnegative Ricci: bound and subexponential conclusion") {
    for (int n : {2, 3}) {
        const RicciDecayProfile decay([](double s) { return std::exp(-s); }, n);
        CHECK(std::fabs(decay.b0() - 1.0) <= 1e-9);
        for (double r : {0.5, 1.0, 3.0}) {
            const double expected = std::exp(1.0) * std::pow(r, n);
            CHECK(std::fabs(ricci_volume_bound(decay, r) - expected) <= 1e-8 * expected);
        }
    }

    // a tabulated profile honoring V(r) <= e^{b0} r^n with b0 = 1, n = 3
    std::vector<double> ts, vs;
    for (double t = 0.5; t <= 620.0001; t += 0.5) {
        ts.push_back(t);
        vs.push_back(0.9 * std::exp(1.0) * 3.0 * t * t);  // V = 0.9 e (t^3 - 0.125)
    }
    const VolumeProfile tab = VolumeProfile::tabulated(std::move(ts), std::move(vs));
    for (double r : {1.0, 10.0, 100.0, 600.0}) {
        CHECK(cumulative_volume(tab, r) <= std::exp(1.0) * std::pow(r, 3.0));
    }
    const GrowthReport growth = growth_exponent(tab, 600.0);
    CHECK(std::fabs(growth.theta_estimate) < 0.02);
    const SpectralBound bound = theta_upper_bound(tab, 2.0, 600.0);
    CHECK(bound.value == 0.0);
    std::printf("[acceptance] C10 ricci-volume-bound PASS (theta=%.4f -> bound 0)\n",
                growth.theta_estimate);
}

TEST_CASE("C11 CLI determinism and exit-code contract") {
    const char* kSinh = "model_manifold:n=2,kappa=-1";
    struct Cmd {
        std::string args;
        std::string tag;
        int expected_exit;
    };
    const fs::path dir = fs::path(TEST_TMPDIR);
    fs::create_directories(dir);
    const fs::path csv = dir / "acc_finite_vol.csv";
    {
        std::ofstream f(csv);
        f << "t,v\n";
        for (double t = 0.0; t <= 100.0001; t += 0.5) f << t << ',' << std::exp(-5.0 * t) << '\n';
    }

    const Cmd cmds[] = {
        {"oscillate --profile constant --p 2 --lambda 1 --t-start 0 --horizon 50", "a_osc", 0},
        {std::string("oscillate --profile ") + kSinh +
             " --p 2 --lambda 0.26 --t-start 1 --horizon 30 --t-max 200",
         "a_osc_hl", 2},
        {std::string("bound --profile ") + kSinh + " --p 2 --t-max 200", "a_bound", 0},
        {"bound --profile " + csv.string() + " --p 2", "a_bound_fv", 3},
        {std::string("sweep --profile ") + kSinh +
             " --p 2 --lambda-grid 0.3,0.5,1 --t-start 1 --horizon 600",
         "a_sweep", 0},
        {std::string("sweep --profile ") + kSinh + " --p 2", "a_sweep_bad", 1},
        {"trace --profile constant --p 2 --lambda 1 --t-start 0 --horizon 6.283 --resample 65 "
         "--riccati",
         "a_trace", 0},
        {"riccati-check --profile exponential:A=1,c=3 --p 3 --lambda 1 --y0 1 --t-start 0 "
         "--horizon 8",
         "a_rcheck", 0},
    };
    for (const auto& c : cmds) {
        std::string out1, out2;
        const int e1 = run_command(c.args, c.tag + "_1", &out1);
        const int e2 = run_command(c.args, c.tag + "_2", &out2);
        CHECK(e1 == c.expected_exit);
        CHECK(e2 == c.expected_exit);
        CHECK(out1 == out2);  // byte-identical reruns
    }
    std::printf("[acceptance] C11 cli-contract PASS (5 subcommands, byte-identical reruns)\n");
}
