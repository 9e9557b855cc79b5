#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsp/quadrature.hpp"

using namespace wsp;

TEST_CASE("polynomials are integrated exactly") {
    auto cubic = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
    CHECK(integrate(cubic, 0.0, 2.0) == doctest::Approx(8.0 - 4.0 + 2.0).epsilon(1e-12));
    auto quintic = [](double x) { return x * x * x * x * x; };
    CHECK(integrate(quintic, -1.0, 3.0) == doctest::Approx((729.0 - 1.0) / 6.0).epsilon(1e-10));
}

TEST_CASE("exponential tail against the antiderivative") {
    auto f = [](double x) { return std::exp(-x); };
    const double got = integrate(f, 0.0, 40.0);
    CHECK(got == doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-8));
}

TEST_CASE("piecewise integration splits on supplied breakpoints") {
    // |x - 1| has a kink at 1; splitting there keeps each piece smooth
    auto f = [](double x) { return std::fabs(x - 1.0); };
    const double got = integrate_pieces(f, {0.0, 1.0, 3.0});
    CHECK(got == doctest::Approx(0.5 + 2.0).epsilon(1e-12));
}

TEST_CASE("degenerate and reversed intervals") {
    auto f = [](double x) { return x; };
    CHECK(integrate(f, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(integrate(f, 3.0, 1.0), std::invalid_argument);
    CHECK(integrate_pieces(f, {1.0}) == 0.0);
}

TEST_CASE("tolerances are honored on an oscillatory integrand") {
    auto f = [](double x) { return std::sin(10.0 * x); };
    const double exact = (1.0 - std::cos(10.0 * 2.0)) / 10.0;
    QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    CHECK(integrate(f, 0.0, 2.0, opt) == doctest::Approx(exact).epsilon(1e-9));
}
