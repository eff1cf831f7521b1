#include <doctest.h>

#include <cmath>

#include "halflin/quadrature.hpp"

using namespace halflin;

TEST_SUITE("quadrature") {

    TEST_CASE("smooth integrals against closed forms") {
        const double pi = std::acos(-1.0);
        CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
              doctest::Approx(2.0).epsilon(1e-10));
        CHECK(quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
              doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
        CHECK(quad::integrate([](double x) { return 1.0 / x; }, 1.0, 2.0) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-10));
        CHECK(quad::integrate([](double) { return 1.0; }, 0.0, 5.0) ==
              doctest::Approx(5.0).epsilon(1e-14));
        CHECK(quad::adaptive_simpson([](double x) { return x * x; }, 2.0, 2.0).value == 0.0);
    }

    TEST_CASE("refinement budget exhaustion carries the achieved estimate") {
        quad::Options opt;
        opt.max_depth = 4;
        opt.abs_tol = 1e-14;
        opt.rel_tol = 1e-14;
        // highly oscillatory on a wide interval; 4 levels cannot resolve it
        const auto f = [](double x) { return std::sin(200.0 * x * x); };
        const quad::Result r = quad::adaptive_simpson(f, 0.0, 10.0, opt);
        CHECK_FALSE(r.converged);
        CHECK(r.error_estimate > 0.0);
        try {
            quad::integrate(f, 0.0, 10.0, opt);
            FAIL("expected QuadratureError");
        } catch (const QuadratureError& e) {
            CHECK(e.achieved_error() == r.error_estimate);
            CHECK(e.value() == r.value);
        }
    }

    TEST_CASE("improper integrals with tail truncation") {
        // int_0^inf s e^{-s} ds = 1
        const auto moment = quad::integrate_to_infinity(
            [](double s) { return s * std::exp(-s); }, 0.0, {1e-13, 1e-12, 60});
        CHECK(moment.value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(moment.tail_estimate <= 1e-8);

        // int_0^inf s (1+s)^{-3} ds = 1/2
        const auto m2 = quad::integrate_to_infinity(
            [](double s) { return s / std::pow(1.0 + s, 3.0); }, 0.0, {1e-13, 1e-12, 60});
        CHECK(m2.value == doctest::Approx(0.5).epsilon(1e-7));

        // identically zero integrand converges to zero
        const auto z = quad::integrate_to_infinity([](double) { return 0.0; }, 0.0);
        CHECK(z.value == 0.0);
    }

    TEST_CASE("divergent improper integral is rejected") {
        CHECK_THROWS_AS(quad::integrate_to_infinity(
                            [](double s) { return s / (1.0 + s); }, 0.0),
                        DomainError);
        CHECK_THROWS_AS(quad::integrate_to_infinity([](double) { return 1.0; }, 0.0),
                        DomainError);
    }
}
