#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wsp/nash.hpp"
#include "wsp/shared_game.hpp"

using namespace wsp;

namespace {

// pooled plans cost about as much as individual ones: nobody gains by waiting
SharedMarket mild_market() {
    SharedMarket m;
    m.n = 100.0;
    m.eta0 = 0.3;
    m.alpha = 0.5;
    m.lambda = 1.0;
    m.lambda0 = 0.5;
    m.discount = 1.0;
    m.shares = {0.4, 0.6};
    m.ec_l = 20.0;
    m.ec_h = 21.25;
    m.ec_hh = 40.0 + 40.0 / 48.0;
    m.ec_hl = 40.0;
    return m;
}

// pooled plans cost far less than individual ones: lock-in matters
SharedMarket strong_market() {
    SharedMarket m;
    m.n = 100.0;
    m.eta0 = 0.2;
    m.alpha = 0.5;
    m.lambda = 1.0;
    m.lambda0 = 0.5;
    m.discount = 1.0;
    m.shares = {0.5, 0.5};
    m.ec_l = 30.0;
    m.ec_h = 40.0;
    m.ec_hh = 20.0;
    m.ec_hl = 25.0;
    return m;
}

SharedMarket random_market(std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    SharedMarket m;
    m.n = U(10.0, 300.0);
    m.eta0 = U(0.0, 1.5);
    m.alpha = U(0.1, 1.0);
    m.lambda0 = U(0.05, 0.8);
    m.lambda = m.lambda0 + U(0.1, 3.0);
    m.discount = U(0.3, 2.0);
    const double e1 = U(0.05, 0.95);
    m.shares = {e1, 1.0 - e1};
    m.ec_l = U(5.0, 25.0);
    m.ec_h = m.ec_l + U(0.0, 15.0);
    m.ec_hh = 2.0 * m.ec_h * U(0.7, 1.0);
    m.ec_hl = (m.ec_h + m.ec_l) * U(0.7, 1.0);
    if (!(m.agg_d() >= m.agg_e())) m.ec_hh = 2.0 * m.ec_h;
    return m;
}

double profile_profit(const SharedMarket& m, std::size_t i, const std::vector<ExtendedTime>& p) {
    return profit_shared(m, i, p[i], p[1 - i]).total;
}

}  // namespace

TEST_CASE("gain ratio examples") {
    const SharedMarket m = strong_market();
    // ((d-e) ei^2 - e (lambda/S) ei) / (e eta0 lambda0 / (2S))
    CHECK(kappa_shared(m, 0) == doctest::Approx(0.625 / 0.875).epsilon(1e-12));
    SharedMarket sparse = m;
    sparse.eta0 = 0.05;
    CHECK(kappa_shared(sparse, 0) == doctest::Approx(0.625 / 0.21875).epsilon(1e-12));
    SharedMarket zero = m;
    zero.shares = {0.0, 1.0};
    CHECK(kappa_shared(zero, 0) == 0.0);
    // the ratio crosses zero where (d-e) ei = e lambda / S
    SharedMarket at_root = m;
    at_root.shares = {17.5 / 37.5, 1.0 - 17.5 / 37.5};
    CHECK(kappa_shared(at_root, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("classification: trivial regimes") {
    SharedEquilibrium eq = classify_and_solve_shared(mild_market());
    CHECK(eq.regime == Regime::mild_reduction_immediate);
    CHECK(eq.times[0].value() == 0.0);
    CHECK(eq.times[1].value() == 0.0);

    SharedMarket m = strong_market();
    CHECK(shared_thresholds(m).large_bound_s == doctest::Approx(32.0 / 7.0).epsilon(1e-12));
    m.eta0 = 4.6;
    eq = classify_and_solve_shared(m);
    CHECK(eq.regime == Regime::large_eta0_immediate);
    CHECK(eq.times[0].value() == 0.0);

    m.eta0 = 0.05;  // almost no inflow and similar shares: nobody moves
    eq = classify_and_solve_shared(m);
    CHECK(eq.regime == Regime::small_no_upgrade);
    CHECK(eq.times[0].is_never());
    CHECK(eq.times[1].is_never());
    CHECK(eq.profits[0] == doctest::Approx(profit_shared_never(m, 0)).epsilon(1e-12));

    m.ec_h = 160.0;  // beyond the supported reduction range
    CHECK_THROWS_AS(classify_and_solve_shared(m), SolverError);
}

TEST_CASE("classification: asymmetric shares put the small provider first") {
    SharedMarket m = strong_market();
    m.shares = {0.2, 0.8};
    const SharedEquilibrium eq = classify_and_solve_shared(m);
    CHECK(eq.regime == Regime::medium_asymmetric);
    CHECK(eq.times[0].value() == 0.0);
    const double k1 = kappa_shared(m, 1);
    REQUIRE(k1 > 1.0);
    CHECK(eq.times[1].value() == doctest::Approx(std::log(k1) / 0.5).epsilon(1e-12));
    CHECK(eq.times[1].value() == doctest::Approx(4.87223).epsilon(1e-5));

    const SharedEquilibrium sym = classify_and_solve_shared(strong_market());
    CHECK(sym.regime == Regime::medium_both_immediate);
    CHECK(sym.times[0].value() == 0.0);
    CHECK(sym.times[1].value() == 0.0);
}

TEST_CASE("classification is symmetric under relabeling the providers") {
    std::mt19937_64 rng(613);
    for (int k = 0; k < 25; ++k) {
        SharedMarket m = random_market(rng);
        SharedMarket swapped = m;
        std::swap(swapped.shares[0], swapped.shares[1]);
        const SharedEquilibrium a = classify_and_solve_shared(m);
        const SharedEquilibrium b = classify_and_solve_shared(swapped);
        CHECK(a.regime == b.regime);
        auto same = [](const ExtendedTime& x, const ExtendedTime& y) {
            if (x.is_never() || y.is_never()) return x.is_never() && y.is_never();
            return std::fabs(x.value() - y.value()) <= 1e-12 * std::max(1.0, x.value());
        };
        CHECK(same(a.times[0], b.times[1]));
        CHECK(same(a.times[1], b.times[0]));
        CHECK(a.profits[0] == doctest::Approx(b.profits[1]).epsilon(1e-10));
    }
}

TEST_CASE("solved profiles are epsilon-Nash on the deviation grid") {
    std::mt19937_64 rng(509);
    int certified = 0;
    for (int k = 0; k < 40; ++k) {
        const SharedMarket m = random_market(rng);
        const SharedEquilibrium eq = classify_and_solve_shared(m);
        const auto grid = deviation_grid(default_grid_step(m.discount, m.lambda, m.lambda0),
                                         default_t_max(m));
        auto profit = [&](std::size_t i, const std::vector<ExtendedTime>& p) {
            return profile_profit(m, i, p);
        };
        const DeviationCheck c = check_epsilon_nash(profit, eq.times, grid);
        CHECK(c.passed);
        const DeviationCheck cs = check_epsilon_nash_serial(profit, eq.times, grid);
        CHECK(c.max_gain == doctest::Approx(cs.max_gain).epsilon(1e-12));
        if (c.passed) ++certified;
    }
    CHECK(certified == 40);
}

TEST_CASE("best response examples") {
    SharedMarket m = strong_market();
    // symmetric strong market, rival immediate, ratio below 1: match at once
    CHECK(best_response_shared(m, 1, ExtendedTime::at(0.0)).value() == 0.0);
    // rival never pools: holding the lucrative individual plans wins
    CHECK(best_response_shared(m, 0, ExtendedTime::never()).is_never());
    // mild market: pooling immediately beats waiting even without competition
    CHECK(best_response_shared(mild_market(), 0, ExtendedTime::never()).value() == 0.0);
    m.shares = {0.2, 0.8};
    const double k1 = kappa_shared(m, 1);
    CHECK(best_response_shared(m, 1, ExtendedTime::at(0.0)).value() ==
          doctest::Approx(std::log(k1) / 0.5).epsilon(1e-12));
}

TEST_CASE("best response dominates a fine grid scan") {
    std::mt19937_64 rng(811);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    for (int k = 0; k < 20; ++k) {
        const SharedMarket m = random_market(rng);
        const ExtendedTime tj =
            U(0.0, 1.0) < 0.2 ? ExtendedTime::never() : ExtendedTime::at(U(0.0, 5.0));
        const ExtendedTime br = best_response_shared(m, 0, tj);
        const double br_profit = profit_shared(m, 0, br, tj).total;
        double grid_best = profit_shared(m, 0, ExtendedTime::never(), tj).total;
        const double step = default_grid_step(m.discount, m.lambda, m.lambda0) / 4.0;
        for (double t = 0.0; t <= default_t_max(m); t += step)
            grid_best = std::max(grid_best, profit_shared(m, 0, ExtendedTime::at(t), tj).total);
        CHECK(br_profit >= grid_best - 1e-7 * std::max(1.0, std::fabs(grid_best)));
    }
}

TEST_CASE("no-upgrade band edge grows with the new-user inflow") {
    SharedMarket m = strong_market();
    double prev = 0.0;
    for (double eta0 : {0.05, 0.2, 0.5, 1.0, 4.6}) {
        m.eta0 = eta0;
        const double hat = shared_thresholds(m).eta_s_hat;
        CHECK(hat > prev);
        prev = hat;
    }
}

TEST_CASE("zero-new-user branch analysis") {
    SharedMarket m = strong_market();
    m.ec_h = 10.0;
    m.ec_l = 10.0;
    m.lambda = 0.1;  // bound (2 lambda + S)/S = 1.2
    m.lambda0 = 0.05;

    m.ec_hl = 15.0;  // family (h,l) much cheaper, (h,h) not
    m.ec_hh = 20.0;
    ZeroNewUserReport r = zero_new_user_conditions(m);
    CHECK(r.branch == ZeroNewUserBranch::hh_drives);
    CHECK(r.alpha_threshold == doctest::Approx(0.5).epsilon(1e-12));
    m.alpha = 0.6;
    CHECK(zero_new_user_conditions(m).holds);
    m.alpha = 0.4;
    CHECK_FALSE(zero_new_user_conditions(m).holds);

    m.ec_hh = 15.0;  // family (h,h) much cheaper, (h,l) not
    m.ec_hl = 18.0;
    r = zero_new_user_conditions(m);
    CHECK(r.branch == ZeroNewUserBranch::hl_drives);
    CHECK(r.alpha_threshold == doctest::Approx(3.2 / 5.2).epsilon(1e-12));
    m.alpha = 0.5;
    CHECK(zero_new_user_conditions(m).holds);
    m.alpha = 0.7;
    CHECK_FALSE(zero_new_user_conditions(m).holds);

    m.ec_hl = 15.0;  // both family plans much cheaper: never holds
    m.ec_hh = 15.0;
    CHECK(zero_new_user_conditions(m).branch == ZeroNewUserBranch::never_holds);
    CHECK_FALSE(zero_new_user_conditions(m).holds);

    const ZeroNewUserReport mild = zero_new_user_conditions(mild_market());
    CHECK(mild.branch == ZeroNewUserBranch::both_mild);
    CHECK(mild.holds);
}

TEST_CASE("zero-new-user report matches the solved game at equal shares") {
    std::mt19937_64 rng(917);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    int compared = 0;
    for (int k = 0; k < 80 && compared < 50; ++k) {
        SharedMarket m;
        m.n = 100.0;
        m.eta0 = 0.0;
        m.alpha = U(0.1, 1.0);
        m.lambda0 = U(0.05, 0.8);
        m.lambda = m.lambda0 + U(0.1, 3.0);
        m.discount = U(0.3, 2.0);
        m.shares = {0.5, 0.5};
        m.ec_l = U(5.0, 25.0);
        m.ec_h = m.ec_l + U(0.0, 15.0);
        m.ec_hh = 2.0 * m.ec_h * U(0.6, 1.0);
        m.ec_hl = (m.ec_h + m.ec_l) * U(0.6, 1.0);
        if (!(m.agg_d() >= m.agg_e())) m.ec_hh = 2.0 * m.ec_h;
        if (!(m.agg_d() < m.agg_e() * (4.0 * m.lambda + m.discount) / m.discount)) continue;
        const SharedEquilibrium eq = classify_and_solve_shared(m);
        const ZeroNewUserReport r = zero_new_user_conditions(m);
        const bool immediate = !eq.times[0].is_never() && eq.times[0].value() == 0.0 &&
                               !eq.times[1].is_never() && eq.times[1].value() == 0.0;
        CHECK(immediate == r.master_holds);
        CHECK(r.holds == r.master_holds);
        ++compared;
    }
    CHECK(compared == 50);
}
