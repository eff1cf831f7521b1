#include <doctest.h>

#include <cmath>
#include <sstream>

#include "halflin/quadrature.hpp"
#include "halflin/riccati.hpp"

using namespace halflin;

namespace {

const double kPi = std::acos(-1.0);

// direct-integration values at requested times, by chaining exact-endpoint runs
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

RiccatiTrajectory analytic_trajectory(const HalfLinearParams& prm, const VolumeProfile& prof,
                                      double t0, double t1, double h,
                                      const std::function<double(double)>& f) {
    RiccatiTrajectory rt(prm, prof, RiccatiOrigin::direct_integration);
    for (double t = t0; t <= t1 + 1e-12; t += h) rt.samples.push_back({t, f(t)});
    return rt;
}

}  // namespace

TEST_SUITE("riccati") {

    TEST_CASE("p = 2 Riccati is the tangent") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, 0.0, {0.0, 1.5});
        CHECK_FALSE(rt.blow_up.has_value());
        for (const auto& s : rt.samples) {
            CHECK(std::fabs(s.y - std::tan(s.t)) <= 1e-7 * (1.0 + std::fabs(std::tan(s.t))));
        }
    }

    TEST_CASE("blow-up of tan at pi/2") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, 0.0, {0.0, 2.0});
        REQUIRE(rt.blow_up.has_value());
        CHECK(std::fabs(rt.blow_up->time - kPi / 2.0) <= 1e-6);
        REQUIRE(rt.blow_up->threshold_sequence.size() == 3);
        CHECK(rt.blow_up->threshold_sequence[0] < rt.blow_up->threshold_sequence[1]);
        CHECK(rt.blow_up->threshold_sequence[1] < rt.blow_up->threshold_sequence[2]);
        CHECK(rt.samples.back().t <= rt.blow_up->time + 1e-12);
        CHECK(std::fabs(rt.samples.back().y) == doctest::Approx(1e12).epsilon(1e-6));
    }

    TEST_CASE("substitution from sine gives -cot") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const Trajectory sin_traj = integrate_halflinear(prm, v1, 0.0, 1.0, {0.0, kPi});
        const RiccatiTrajectory rt = riccati_from_solution(sin_traj, 0.2, kPi - 0.2, 513);
        CHECK(rt.origin == RiccatiOrigin::substitution_from_solution);
        for (const auto& s : rt.samples) {
            const double expect = -std::cos(s.t) / std::sin(s.t);
            CHECK(std::fabs(s.y - expect) <= 1e-7 * (1.0 + std::fabs(expect)));
        }
    }

    TEST_CASE("substitution from cosine gives tan") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const Trajectory cos_traj = integrate_halflinear(prm, v1, 1.0, 0.0, {0.0, 1.5});
        const RiccatiTrajectory rt = riccati_from_solution(cos_traj, 0.05, 1.4, 513);
        for (const auto& s : rt.samples) {
            CHECK(std::fabs(s.y - std::tan(s.t)) <= 1e-7 * (1.0 + std::fabs(std::tan(s.t))));
        }
    }

    TEST_CASE("substitution window must avoid zeros") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const Trajectory traj = integrate_halflinear(prm, v1, 0.0, 1.0, {0.0, 7.0});
        CHECK_THROWS_AS(riccati_from_solution(traj, 2.0, 4.0, 65), DomainError);
    }

    TEST_CASE("blow-up matches the next zero of the generating solution") {
        // p = 3: start x at (1, -1) so y0 = -Phi(x')/Phi(x) = 1
        const HalfLinearParams prm = HalfLinearParams::make(3.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const Trajectory xtraj = integrate_halflinear(prm, v1, 1.0, -1.0, {0.0, 5.0});
        const std::vector<double> zeros = find_zeros(xtraj);
        REQUIRE(!zeros.empty());
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, 1.0, {0.0, 5.0});
        REQUIRE(rt.blow_up.has_value());
        CHECK(std::fabs(rt.blow_up->time - zeros[0]) <= 1e-6);
    }

    TEST_CASE("residual on exact p = 2 solutions") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory tan_rt = analytic_trajectory(
            prm, v1, 0.05, 1.45, 1e-4, [](double t) { return std::tan(t); });
        CHECK(riccati_residual(tan_rt, v1, prm) < 1e-6);

        const RiccatiTrajectory cot_rt = analytic_trajectory(
            prm, v1, 0.3, kPi - 0.3, 1e-4,
            [](double t) { return -std::cos(t) / std::sin(t); });
        CHECK(riccati_residual(cot_rt, v1, prm) < 1e-6);

        RiccatiTrajectory tiny(prm, v1, RiccatiOrigin::direct_integration);
        tiny.samples = {{0.0, 0.0}, {0.1, 0.1}};
        CHECK_THROWS_AS(riccati_residual(tiny, v1, prm), ParameterError);
    }

    TEST_CASE("residual contract for substitution trajectories") {
        // p = 2.5, v = t^2 on a zero-free window of the canonical solution
        {
            const HalfLinearParams prm = HalfLinearParams::make(2.5, 1.0);
            const VolumeProfile prof = VolumeProfile::power(1.0, 2.0);
            const Trajectory traj = integrate_halflinear(prm, prof, 0.0, 1.0, {1.0, 30.0});
            const std::vector<double> zeros = find_zeros(traj);
            REQUIRE(zeros.size() >= 2);
            const double gap = zeros[1] - zeros[0];
            const RiccatiTrajectory rt = riccati_from_solution(
                traj, zeros[0] + 0.05 * gap, zeros[1] - 0.05 * gap);
            CHECK(riccati_residual(rt, prof, prm) < 1e-5);
        }
        // p = 3, v = e^t on the first positivity window
        {
            const HalfLinearParams prm = HalfLinearParams::make(3.0, 0.5);
            const VolumeProfile prof = VolumeProfile::exponential(1.0, 1.0);
            const Trajectory traj = integrate_halflinear(prm, prof, 0.0, 1.0, {0.0, 12.0});
            const std::vector<double> zeros = find_zeros(traj);
            REQUIRE(!zeros.empty());
            const RiccatiTrajectory rt = riccati_from_solution(traj, 0.1, zeros[0] - 0.1);
            CHECK(riccati_residual(rt, prof, prm) < 1e-5);
        }
    }

    TEST_CASE("case classification") {
        CHECK(case_classification(VolumeProfile::constant(1.0), 2.0, 100.0) ==
              CaseClass::case_II);
        CHECK(case_classification(VolumeProfile::constant(1.0), 1.3, 100.0) ==
              CaseClass::case_II);
        CHECK(case_classification(VolumeProfile::exponential(1.0, 2.0), 2.0, 100.0) ==
              CaseClass::case_I);
        CHECK(case_classification(VolumeProfile::exponential(1.0, -0.5), 2.0, 100.0) ==
              CaseClass::case_II);
        CHECK(case_classification(VolumeProfile::power(1.0, 1.0), 2.0, 100.0) ==
              CaseClass::case_II);  // int 1/t diverges
        CHECK(case_classification(VolumeProfile::power(1.0, 3.0), 2.0, 100.0) ==
              CaseClass::case_I);  // int t^{-3} converges
        CHECK(case_classification(model_manifold_profile(2, -1.0), 2.0, 100.0) ==
              CaseClass::case_I);
        CHECK(case_classification(model_manifold_profile(4, 0.0), 2.0, 100.0) ==
              CaseClass::case_I);  // (n-1)(q-1) = 3 > 1
        CHECK(case_classification(model_manifold_profile(2, 0.0), 2.0, 100.0) ==
              CaseClass::case_II);  // int 1/r diverges
    }

    TEST_CASE("numeric case classification on tabulated data") {
        // v = t on [1, 400]: increments of int dt/t across doubling windows
        // are exactly log 2 (the doubling-increment oracle)
        std::vector<double> ts, vs;
        for (double t = 1.0; t <= 400.0001; t += 0.25) {
            ts.push_back(t);
            vs.push_back(t);
        }
        const VolumeProfile tab_t = VolumeProfile::tabulated(ts, vs);
        CHECK(case_classification(tab_t, 2.0, 400.0) == CaseClass::case_II);
        const double i1 = quad::integrate([](double s) { return 1.0 / s; }, 50.0, 100.0);
        const double i2 = quad::integrate([](double s) { return 1.0 / s; }, 100.0, 200.0);
        CHECK(i1 == doctest::Approx(std::log(2.0)).epsilon(1e-9));
        CHECK(i2 == doctest::Approx(std::log(2.0)).epsilon(1e-9));

        std::vector<double> te, ve;
        for (double t = 0.0; t <= 60.0001; t += 0.1) {
            te.push_back(t);
            ve.push_back(std::exp(2.0 * t));
        }
        CHECK(case_classification(VolumeProfile::tabulated(te, ve), 2.0, 60.0) ==
              CaseClass::case_I);
    }

    TEST_CASE("monotone forcing: y nondecreasing when lambda > 0") {
        for (double p : {1.6, 2.0, 3.0}) {
            const HalfLinearParams prm = HalfLinearParams::make(p, 0.8);
            const RiccatiTrajectory rt =
                integrate_riccati(prm, VolumeProfile::constant(2.0), -3.0, {0.0, 4.0});
            for (std::size_t i = 1; i < rt.samples.size(); ++i) {
                CHECK(rt.samples[i].y >= rt.samples[i - 1].y - 1e-12);
            }
        }
    }

    TEST_CASE("growth bound and Young step for the tangent") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, std::tan(0.1), {0.1, 1.4});
        const GrowthBoundReport rep = growth_bound_check(rt, prm, 0.1);
        CHECK(rep.growth_holds);
        CHECK(rep.young_holds);
        CHECK(rep.samples_checked == rt.samples.size());
        // spot value at t = 1.4: tan(1.4) >= tan(0.1) e^{2(1.4-0.1)}
        CHECK(std::tan(1.4) >= std::tan(0.1) * std::exp(2.0 * 1.3));
        CHECK(std::tan(0.1) * std::exp(2.0 * 1.3) == doctest::Approx(1.3507).epsilon(1e-3));
        // direct pointwise oracle at 100 points
        const double rate = 2.0 * std::sqrt(1.0);
        for (int i = 0; i <= 99; ++i) {
            const double t = 0.1 + 1.3 * i / 99.0;
            CHECK(std::tan(t) + 1e-12 >= std::tan(0.1) * std::exp(rate * (t - 0.1)) - 1e-9);
        }
    }

    TEST_CASE("growth bound equality case on v = e^{3t}, p = 3") {
        // y = e^{3t} solves the equation exactly and meets the bound with equality
        const HalfLinearParams prm = HalfLinearParams::make(3.0, 1.0);
        const VolumeProfile prof = VolumeProfile::exponential(1.0, 3.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, prof, 1.0, {0.0, 8.0});
        for (const auto& s : rt.samples) {
            CHECK(std::fabs(s.y - std::exp(3.0 * s.t)) <= 1e-7 * std::exp(3.0 * s.t));
        }
        const GrowthBoundReport rep = growth_bound_check(rt, prm, 0.0);
        CHECK(rep.growth_holds);
        CHECK(rep.young_holds);
        CHECK(rep.worst_growth_margin >= -1e-8);
        CHECK(rep.worst_young_margin >= -1e-10);
    }

    TEST_CASE("growth bound preconditions") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, -5.0, {0.0, 0.5});
        CHECK_THROWS_AS(growth_bound_check(rt, prm, 0.0), ParameterError);
        const HalfLinearParams neg = HalfLinearParams::make(2.0, -1.0);
        CHECK_THROWS_AS(growth_bound_check(rt, neg, 0.0), ParameterError);
    }

    TEST_CASE("substitution correspondence and blow-up duality") {
        const HalfLinearParams prm = HalfLinearParams::make(2.2, 0.8);
        const VolumeProfile prof = VolumeProfile::power(1.0, 1.0);
        const Trajectory traj = integrate_halflinear(prm, prof, 0.0, 1.0, {1.0, 40.0});
        const std::vector<double> zeros = find_zeros(traj);
        REQUIRE(zeros.size() >= 2);
        const double gap = zeros[1] - zeros[0];
        const double a = zeros[0] + 0.05 * gap;
        const double b = zeros[1] - 0.05 * gap;

        const RiccatiTrajectory sub = riccati_from_solution(traj, a, b, 257);
        std::vector<double> ts;
        for (const auto& s : sub.samples) ts.push_back(s.t);
        const std::vector<double> direct =
            riccati_values_at(prm, prof, sub.samples.front().y, a, ts);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (std::fabs(sub.samples[i].y) > 1e6) break;
            CHECK(std::fabs(sub.samples[i].y - direct[i]) <=
                  1e-6 * (1.0 + std::fabs(direct[i])));
        }

        // the direct solution blows up at the next zero of x
        const RiccatiTrajectory dir_rt =
            integrate_riccati(prm, prof, sub.samples.front().y, {a, zeros[1] + 1.0});
        REQUIRE(dir_rt.blow_up.has_value());
        CHECK(std::fabs(dir_rt.blow_up->time - zeros[1]) <= 1e-6);
    }

    TEST_CASE("csv and blow-up serialization") {
        const HalfLinearParams prm = HalfLinearParams::make(2.0, 1.0);
        const VolumeProfile v1 = VolumeProfile::constant(1.0);
        const RiccatiTrajectory rt = integrate_riccati(prm, v1, 0.0, {0.0, 2.0});
        std::ostringstream os;
        write_riccati_csv(os, rt);
        CHECK(os.str().substr(0, 4) == "t,y\n");
        REQUIRE(rt.blow_up.has_value());
        const nlohmann::ordered_json j = blow_up_to_json(*rt.blow_up);
        CHECK(j.contains("time"));
        CHECK(j["threshold_sequence"].size() == 3);
    }
}
