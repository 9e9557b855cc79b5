// Compares the OpenMP kernels against their serial references on the three
// parallel hot paths: regime-map sweeps, Monte Carlo replications and the
// deviation-check grid.
#include <chrono>
#include <cstdio>
#include <vector>

#include "wsp/market.hpp"
#include "wsp/nash.hpp"
#include "wsp/profit.hpp"
#include "wsp/rollover_game.hpp"
#include "wsp/sim.hpp"

using namespace wsp;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

MarketConfig base_config() {
    MarketConfig cfg;
    cfg.n = 100.0;
    cfg.shares = {0.4, 0.6};
    cfg.eta0 = 0.3;
    cfg.alpha = 0.25;
    cfg.rates = {1.0, 0.5};
    cfg.discount = 1.0;
    cfg.plan = {20.0, 3.0, 10.0};
    cfg.light.user_class = UserClass::light;
    cfg.light.max_usage = 2.0;
    cfg.heavy.user_class = UserClass::heavy;
    cfg.heavy.max_usage = 6.0;
    return cfg;
}

RolloverMarket strong_market() {
    RolloverMarket m;
    m.n = 100.0;
    m.eta0 = 0.3;
    m.alpha = 0.4;
    m.lambda = 1.0;
    m.lambda0 = 0.5;
    m.discount = 1.0;
    m.shares = {0.5, 0.5};
    m.ec_h = 8.0;
    m.ec_h_r = 3.0;
    return m;
}

void bench_regime_map() {
    const RolloverMarket base = strong_market();
    const int n = 201;
    std::vector<Regime> serial(static_cast<std::size_t>(n) * n);
    std::vector<Regime> parallel(serial.size());
    auto cell = [&](int j, int k) {
        RolloverMarket m = base;
        m.eta0 = 1.5 * j / (n - 1);
        const double e = (k + 0.5) / n;
        m.shares = {e, 1.0 - e};
        return classify_and_solve(m).regime;
    };
    const double t0 = now();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) serial[static_cast<std::size_t>(j) * n + k] = cell(j, k);
    const double t1 = now();
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) parallel[static_cast<std::size_t>(j) * n + k] = cell(j, k);
    const double t2 = now();
    const bool same = serial == parallel;
    std::printf("regime-map %dx%d:  serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n", n, n,
                t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1), same ? "identical" : "MISMATCH");
}

void bench_monte_carlo() {
    const MarketConfig cfg = base_config();
    SimConfig sim;
    sim.seed = 99;
    sim.months = 176;
    sim.dt = 0.25;
    sim.replications = 400;
    const ExtendedTime t0u = ExtendedTime::at(0.5), t1u = ExtendedTime::at(2.0);
    const double t0 = now();
    const SimResult ser = simulate_rollover(cfg, sim, t0u, t1u, false);
    const double t1 = now();
    const SimResult par = simulate_rollover(cfg, sim, t0u, t1u, true);
    const double t2 = now();
    bool same = ser.records.size() == par.records.size();
    for (std::size_t k = 0; same && k < ser.records.size(); ++k)
        same = ser.records[k].profit == par.records[k].profit;
    std::printf("monte-carlo %d reps: serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                sim.replications, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1),
                same ? "identical" : "MISMATCH");
}

void bench_deviation_check() {
    const RolloverMarket m = strong_market();
    const std::vector<ExtendedTime> profile = classify_and_solve(m).times;
    const auto grid = deviation_grid(2e-4, default_t_max(m));
    auto profit = [&](std::size_t i, const std::vector<ExtendedTime>& p) {
        return profit_rollover(m, i, p[i], p[1 - i]).total;
    };
    const double t0 = now();
    const DeviationCheck ser = check_epsilon_nash_serial(profit, profile, grid);
    const double t1 = now();
    const DeviationCheck par = check_epsilon_nash(profit, profile, grid);
    const double t2 = now();
    const bool same = ser.passed == par.passed && ser.max_gain == par.max_gain &&
                      ser.provider == par.provider && ser.deviation == par.deviation;
    std::printf("deviation check %zu pts: serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                grid.size(), t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1),
                same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    bench_regime_map();
    bench_monte_carlo();
    bench_deviation_check();
    return 0;
}
