#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wsp/profit.hpp"

using namespace wsp;

namespace {

RolloverMarket rollover_base() {
    RolloverMarket m;
    m.n = 200.0;
    m.eta0 = 0.3;
    m.alpha = 0.25;
    m.lambda = 1.0;
    m.lambda0 = 0.5;
    m.discount = 1.0;
    m.shares = {0.5, 0.5};
    m.ec_h = 27.5;
    m.ec_h_r = 25.0;
    return m;
}

SharedMarket shared_base() {
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

RolloverMarket random_rollover(std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    RolloverMarket m;
    m.n = U(10.0, 500.0);
    m.eta0 = U(0.0, 0.8);
    m.alpha = U(0.05, 1.0);
    m.lambda0 = U(0.05, 0.8);
    m.lambda = m.lambda0 + U(0.1, 3.0);
    m.discount = U(0.3, 2.0);
    const double e1 = U(0.05, 0.95);
    m.shares = {e1, 1.0 - e1};
    m.ec_h_r = U(1.0, 30.0);
    m.ec_h = m.ec_h_r * U(1.0, 1.8);
    return m;
}

SharedMarket random_shared(std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    SharedMarket m;
    m.n = U(10.0, 500.0);
    m.eta0 = U(0.0, 0.8);
    m.alpha = U(0.1, 1.0);
    m.lambda0 = U(0.05, 0.8);
    m.lambda = m.lambda0 + U(0.1, 3.0);
    m.discount = U(0.3, 2.0);
    const double e1 = U(0.05, 0.95);
    m.shares = {e1, 1.0 - e1};
    m.ec_l = U(5.0, 25.0);
    m.ec_h = m.ec_l + U(0.0, 15.0);
    // keep the pooled family no more expensive than two individual plans
    m.ec_hh = 2.0 * m.ec_h * U(0.7, 1.0);
    m.ec_hl = (m.ec_h + m.ec_l) * U(0.7, 1.0);
    if (!(m.agg_d() >= m.agg_e())) m.ec_hh = 2.0 * m.ec_h;
    return m;
}

ExtendedTime random_time(std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    if (U(0.0, 1.0) < 0.15) return ExtendedTime::never();
    return ExtendedTime::at(U(0.0, 6.0));
}

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("profit with nobody upgrading") {
    const RolloverMarket m = rollover_base();
    CHECK(profit_rollover_never(m, 0) == doctest::Approx(1375.0).epsilon(1e-12));
    const auto never = profit_rollover(m, 0, ExtendedTime::never(), ExtendedTime::never());
    CHECK(never.total == doctest::Approx(1375.0).epsilon(1e-12));
    CHECK(never.phase2 == 0.0);
    CHECK(never.phase3 == 0.0);

    const SharedMarket sm = shared_base();
    CHECK(profit_shared_never(sm, 0) == doctest::Approx(0.4 * 100.0 * 31.25).epsilon(1e-12));
    CHECK(profit_shared(sm, 1, ExtendedTime::never(), ExtendedTime::never()).total ==
          doctest::Approx(0.6 * 100.0 * 31.25).epsilon(1e-12));
}

TEST_CASE("profit branches agree at the simultaneous-upgrade boundary") {
    std::mt19937_64 rng(101);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    for (int k = 0; k < 100; ++k) {
        const RolloverMarket m = random_rollover(rng);
        const SharedMarket sm = random_shared(rng);
        const ExtendedTime t = ExtendedTime::at(U(0.0, 5.0));
        for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
            const double re = profit_rollover(m, i, t, t, ProfitBranch::early).total;
            const double rl = profit_rollover(m, i, t, t, ProfitBranch::late).total;
            CHECK(rel_close(re, rl, 1e-9));
            const double se = profit_shared(sm, i, t, t, ProfitBranch::early).total;
            const double sl = profit_shared(sm, i, t, t, ProfitBranch::late).total;
            CHECK(rel_close(se, sl, 1e-9));
        }
    }
}

TEST_CASE("phase assembly matches the displayed closed forms") {
    std::mt19937_64 rng(7);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    for (int k = 0; k < 50; ++k) {
        const SharedMarket m = random_shared(rng);
        const double a = U(0.0, 4.0);
        const double b = a + U(0.0, 4.0);
        const double early =
            profit_shared(m, 0, ExtendedTime::at(a), ExtendedTime::at(b)).total;
        CHECK(rel_close(early, profit_shared_display_early(m, 0, a, b), 1e-9));
        const double late =
            profit_shared(m, 1, ExtendedTime::at(b), ExtendedTime::at(a)).total;
        CHECK(rel_close(late, profit_shared_display_late(m, 1, b, a), 1e-9));
    }
}

TEST_CASE("closed forms agree with the quadrature oracle") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 12; ++k) {
        const RolloverMarket m = random_rollover(rng);
        const SharedMarket sm = random_shared(rng);
        for (int r = 0; r < 3; ++r) {
            const ExtendedTime ti = random_time(rng);
            const ExtendedTime tj = random_time(rng);
            for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
                const double closed = profit_rollover(m, i, ti, tj).total;
                const double oracle = quadrature_profit_oracle(m, i, ti, tj);
                CHECK(rel_close(closed, oracle, 1e-7));
                const double sclosed = profit_shared(sm, i, ti, tj).total;
                const double soracle = quadrature_profit_oracle(sm, i, ti, tj);
                CHECK(rel_close(sclosed, soracle, 1e-7));
            }
        }
    }
}

TEST_CASE("equilibrium closed forms are substitution identities") {
    // kappa > 1 for both providers: delayed times are interior
    RolloverMarket m = rollover_base();
    m.shares = {0.4, 0.6};
    m.ec_h = 8.0;
    m.ec_h_r = 3.0;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
        const std::size_t j = 1 - i;
        const double kj = kappa_rollover(m, j);
        const double ki = kappa_rollover(m, i);
        REQUIRE(kj > 1.0);
        const double tj = std::log(kj) / (m.lambda - m.lambda0);
        const double ti = std::log(ki) / (m.lambda - m.lambda0);
        CHECK(rel_close(equilibrium_profit_formula(m, i, EquilibriumFormula::rollover_simultaneous),
                        profit_rollover(m, i, ExtendedTime::at(0.0), ExtendedTime::at(0.0)).total,
                        1e-10));
        CHECK(rel_close(equilibrium_profit_formula(m, i, EquilibriumFormula::rollover_first),
                        profit_rollover(m, i, ExtendedTime::at(0.0), ExtendedTime::at(tj)).total,
                        1e-10));
        CHECK(rel_close(equilibrium_profit_formula(m, i, EquilibriumFormula::rollover_late),
                        profit_rollover(m, i, ExtendedTime::at(ti), ExtendedTime::at(0.0)).total,
                        1e-10));
    }
    // kappa <= 1 clamps the delayed time to zero
    RolloverMarket clamp = rollover_base();
    clamp.ec_h = clamp.ec_h_r * (clamp.lambda + clamp.discount) / clamp.discount * 0.99;
    CHECK(rel_close(equilibrium_profit_formula(clamp, 0, EquilibriumFormula::rollover_first),
                    profit_rollover(clamp, 0, ExtendedTime::at(0.0), ExtendedTime::at(0.0)).total,
                    1e-10));
}

TEST_CASE("shared equilibrium closed forms are substitution identities") {
    SharedMarket m = shared_base();
    // slow churn so pooling gains can outweigh the lock-in loss for the big provider
    m.lambda = 0.02;
    m.lambda0 = 0.01;
    m.eta0 = 0.01;
    const double k1 = kappa_shared_ratio(m, 1);
    REQUIRE(k1 > 1.0);
    const double t1 = std::log(k1) / (m.lambda - m.lambda0);
    CHECK(rel_close(equilibrium_profit_formula(m, 0, EquilibriumFormula::shared_simultaneous),
                    profit_shared(m, 0, ExtendedTime::at(0.0), ExtendedTime::at(0.0)).total,
                    1e-10));
    CHECK(rel_close(equilibrium_profit_formula(m, 0, EquilibriumFormula::shared_first),
                    profit_shared(m, 0, ExtendedTime::at(0.0), ExtendedTime::at(t1)).total,
                    1e-10));
    CHECK(rel_close(equilibrium_profit_formula(m, 1, EquilibriumFormula::shared_late),
                    profit_shared(m, 1, ExtendedTime::at(t1), ExtendedTime::at(0.0)).total,
                    1e-10));
    // provider 0's ratio is non-positive: the "late" formula folds into (0,0)
    CHECK(kappa_shared_ratio(m, 0) <= 1.0);
    CHECK(rel_close(equilibrium_profit_formula(m, 1, EquilibriumFormula::shared_first),
                    profit_shared(m, 1, ExtendedTime::at(0.0), ExtendedTime::at(0.0)).total,
                    1e-10));
}

TEST_CASE("industry revenue is conserved when both upgrade immediately") {
    std::mt19937_64 rng(59);
    for (int k = 0; k < 30; ++k) {
        const RolloverMarket m = random_rollover(rng);
        const ExtendedTime z = ExtendedTime::at(0.0);
        const double total = profit_rollover(m, 0, z, z).total + profit_rollover(m, 1, z, z).total;
        const double expected =
            2.0 * m.alpha * m.n * m.ec_h_r / m.discount +
            2.0 * m.alpha * m.n0() * m.ec_h_r *
                (1.0 / m.discount - 1.0 / (m.discount + m.lambda0));
        CHECK(rel_close(total, expected, 1e-10));
    }
}

TEST_CASE("profit scales linearly in the population") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 20; ++k) {
        RolloverMarket m = random_rollover(rng);
        SharedMarket sm = random_shared(rng);
        const ExtendedTime ti = random_time(rng), tj = random_time(rng);
        const double r1 = profit_rollover(m, 0, ti, tj).total;
        const double s1 = profit_shared(sm, 0, ti, tj).total;
        m.n *= 3.0;
        sm.n *= 3.0;
        CHECK(rel_close(profit_rollover(m, 0, ti, tj).total, 3.0 * r1, 1e-12));
        CHECK(rel_close(profit_shared(sm, 0, ti, tj).total, 3.0 * s1, 1e-12));
        // rollover profit is also linear in the heavy-user share
        m.n /= 3.0;
        m.alpha *= 0.5;
        CHECK(rel_close(profit_rollover(m, 0, ti, tj).total, 0.5 * r1, 1e-12));
    }
}

TEST_CASE("profit decreases in the discount rate") {
    const RolloverMarket m = rollover_base();
    const SharedMarket sm = shared_base();
    const ExtendedTime ti = ExtendedTime::at(0.5), tj = ExtendedTime::at(2.0);
    double prev_r = std::numeric_limits<double>::infinity();
    double prev_s = std::numeric_limits<double>::infinity();
    for (double s = 0.5; s <= 3.0; s += 0.5) {
        RolloverMarket mr = m;
        mr.discount = s;
        SharedMarket ms = sm;
        ms.discount = s;
        const double r = profit_rollover(mr, 0, ti, tj).total;
        const double sp = profit_shared(ms, 0, ti, tj).total;
        CHECK(r < prev_r);
        CHECK(sp < prev_s);
        prev_r = r;
        prev_s = sp;
    }
}

TEST_CASE("phase breakdown sums to the total and phases are non-negative") {
    std::mt19937_64 rng(131);
    for (int k = 0; k < 30; ++k) {
        const RolloverMarket m = random_rollover(rng);
        const ExtendedTime ti = random_time(rng), tj = random_time(rng);
        const ProfitBreakdown b = profit_rollover(m, 1, ti, tj);
        CHECK(b.total == doctest::Approx(b.phase1 + b.phase2 + b.phase3).epsilon(1e-12));
        CHECK(b.phase1 >= 0.0);
        CHECK(b.phase2 >= 0.0);
        CHECK(b.phase3 >= 0.0);
    }
}
