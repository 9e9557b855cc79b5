// Batch front end: loads a market config and emits plot-ready CSV for costs,
// share trajectories, profits, best responses, equilibria, sweep maps,
// multi-provider tables, verification suites and Monte Carlo runs.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wsp/config_io.hpp"
#include "wsp/cost_model.hpp"
#include "wsp/csvfmt.hpp"
#include "wsp/multi.hpp"
#include "wsp/nash.hpp"
#include "wsp/profit.hpp"
#include "wsp/rollover_game.hpp"
#include "wsp/shared_game.hpp"
#include "wsp/sim.hpp"

using namespace wsp;

namespace {

struct Options {
    std::string config_path;
    std::string plan = "rollover";
    std::string out_path;
    std::string suite = "all";
    int grid = 101;
    std::uint64_t seed = 1;
    bool certify = false;
    std::string t0 = "0", t1 = "0", rival = "0";
    double t_max = 0.0;
    double eta0_max = 1.0;
    double ec_min = 0.0, ec_max = 0.0;
    int reps = 200;
    int months = 0;
    double dt = 0.25;
};

ExtendedTime parse_time(const std::string& s) {
    if (s == "inf" || s == "never") return ExtendedTime::never();
    return ExtendedTime::at(std::stod(s));
}

void emit(const Options& opt, const std::string& csv) {
    if (opt.out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + opt.out_path);
    out << csv;
}

MarketConfig load(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("config: --config is required");
    return load_config(opt.config_path);
}

double default_t_max_for(const MarketConfig& cfg, const std::string& plan) {
    return plan == "shared" ? default_t_max(shared_market(cfg))
                            : default_t_max(rollover_market(cfg));
}

// --- commands ---------------------------------------------------------------

int run_costs(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const CostSummary cs = cost_summary(cfg.plan, cfg.light, cfg.heavy, cfg.alpha);
    std::string csv = "quantity,value\n";
    csv += "ec_light," + csv_num(cs.ec_light) + "\n";
    csv += "ec_heavy," + csv_num(cs.ec_heavy) + "\n";
    csv += "ec_heavy_rollover," + csv_num(cs.ec_heavy_rollover) + "\n";
    csv += "ec_family_hh," + csv_num(cs.ec_family_hh) + "\n";
    csv += "ec_family_hl," + csv_num(cs.ec_family_hl) + "\n";
    csv += "agg_d," + csv_num(cs.agg_d) + "\n";
    csv += "agg_e," + csv_num(cs.agg_e) + "\n";
    emit(opt, csv);
    return 0;
}

int run_trajectory(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const ExtendedTime t0 = parse_time(opt.t0), t1 = parse_time(opt.t1);
    const double t_max = opt.t_max > 0.0 ? opt.t_max : default_t_max_for(cfg, opt.plan);
    const int n = std::max(2, opt.grid);
    std::string csv;
    if (opt.plan == "shared") {
        const SharedMarket m = shared_market(cfg);
        csv = "t,provider,shared_hh,shared_hl,indiv_hh,indiv_hl\n";
        for (int k = 0; k < n; ++k) {
            const double t = t_max * k / (n - 1);
            for (std::size_t i = 0; i < 2; ++i) {
                const SharedCounts c =
                    shared_phase_counts(m, i, t, i == 0 ? t0 : t1, i == 0 ? t1 : t0);
                csv += csv_num(t) + "," + std::to_string(i) + "," + csv_num(c.shared_hh()) + "," +
                       csv_num(c.shared_hl()) + "," +
                       csv_num(c.indiv_pure_hh + c.indiv_mixed_hh) + "," +
                       csv_num(c.indiv_pure_hl + c.indiv_mixed_hl) + "\n";
            }
        }
    } else {
        const RolloverMarket m = rollover_market(cfg);
        csv = "t,provider,retained,switched,new_users,total,on_rollover\n";
        for (int k = 0; k < n; ++k) {
            const double t = t_max * k / (n - 1);
            for (std::size_t i = 0; i < 2; ++i) {
                const RolloverCounts c =
                    rollover_phase_counts(m, i, t, i == 0 ? t0 : t1, i == 0 ? t1 : t0);
                csv += csv_num(t) + "," + std::to_string(i) + "," + csv_num(c.retained) + "," +
                       csv_num(c.switched) + "," + csv_num(c.new_users) + "," +
                       csv_num(c.total()) + "," + (c.on_rollover ? "1" : "0") + "\n";
            }
        }
    }
    emit(opt, csv);
    return 0;
}

int run_profit(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const ExtendedTime times[2] = {parse_time(opt.t0), parse_time(opt.t1)};
    const bool finite = !times[0].is_never() && !times[1].is_never();
    std::string csv = "provider,t_own,t_rival,branch,phase1,phase2,phase3,total\n";
    auto row = [&](std::size_t i, const char* branch, const ProfitBreakdown& b) {
        csv += std::to_string(i) + "," + csv_time(times[i]) + "," + csv_time(times[1 - i]) + "," +
               branch + "," + csv_num(b.phase1) + "," + csv_num(b.phase2) + "," +
               csv_num(b.phase3) + "," + csv_num(b.total) + "\n";
    };
    for (std::size_t i = 0; i < 2; ++i) {
        const ExtendedTime& own = times[i];
        const ExtendedTime& rival = times[1 - i];
        if (opt.plan == "shared") {
            const SharedMarket m = shared_market(cfg);
            if (finite) {
                row(i, "early", profit_shared(m, i, own, rival, ProfitBranch::early));
                row(i, "late", profit_shared(m, i, own, rival, ProfitBranch::late));
            }
            row(i, "selected", profit_shared(m, i, own, rival));
        } else {
            const RolloverMarket m = rollover_market(cfg);
            if (finite) {
                row(i, "early", profit_rollover(m, i, own, rival, ProfitBranch::early));
                row(i, "late", profit_rollover(m, i, own, rival, ProfitBranch::late));
            }
            row(i, "selected", profit_rollover(m, i, own, rival));
        }
    }
    emit(opt, csv);
    return 0;
}

int run_best_response(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const ExtendedTime rival = parse_time(opt.rival);
    std::string csv = "provider,rival_time,best_time,profit\n";
    for (std::size_t i = 0; i < 2; ++i) {
        ExtendedTime br;
        double profit = 0.0;
        if (opt.plan == "shared") {
            const SharedMarket m = shared_market(cfg);
            br = best_response_shared(m, i, rival);
            profit = profit_shared(m, i, br, rival).total;
        } else {
            const RolloverMarket m = rollover_market(cfg);
            br = best_response_rollover(m, i, rival);
            profit = profit_rollover(m, i, br, rival).total;
        }
        csv += std::to_string(i) + "," + csv_time(rival) + "," + csv_time(br) + "," +
               csv_num(profit) + "\n";
    }
    emit(opt, csv);
    return 0;
}

template <class Market, class Equilibrium>
void certify_or_throw(const Market& m, const Equilibrium& eq) {
    const auto grid =
        deviation_grid(default_grid_step(m.discount, m.lambda, m.lambda0), default_t_max(m));
    auto profit = [&](std::size_t i, const std::vector<ExtendedTime>& p) {
        if constexpr (std::is_same_v<Market, RolloverMarket>)
            return profit_rollover(m, i, p[i], p[1 - i]).total;
        else
            return profit_shared(m, i, p[i], p[1 - i]).total;
    };
    const DeviationCheck check = check_epsilon_nash(profit, eq.times, grid);
    if (!check.passed)
        throw SolverError("equilibrium failed the deviation check: provider " +
                          std::to_string(check.provider) + " gains " +
                          csv_num(check.max_gain) + " at t=" + csv_time(check.deviation));
}

int run_equilibrium(const Options& opt) {
    const MarketConfig cfg = load(opt);
    std::string csv;
    if (opt.plan == "shared") {
        const SharedMarket m = shared_market(cfg);
        const SharedEquilibrium eq = classify_and_solve_shared(m);
        if (opt.certify) certify_or_throw(m, eq);
        csv = "regime,t0,t1,profit0,profit1,large_bound_s,eta0_bar_s,small_bound_s,"
              "eta_s_underline,eta_s_hat,eta_s_tilde,certified\n";
        csv += to_string(eq.regime) + "," + csv_time(eq.times[0]) + "," + csv_time(eq.times[1]) +
               "," + csv_num(eq.profits[0]) + "," + csv_num(eq.profits[1]) + "," +
               csv_num(eq.thresholds.large_bound_s) + "," + csv_num(eq.thresholds.eta0_bar_s) +
               "," + csv_num(eq.thresholds.small_bound_s) + "," +
               csv_num(eq.thresholds.eta_s_underline) + "," + csv_num(eq.thresholds.eta_s_hat) +
               "," + csv_num(eq.thresholds.eta_s_tilde) + "," + (opt.certify ? "1" : "0") + "\n";
    } else {
        const RolloverMarket m = rollover_market(cfg);
        const RolloverEquilibrium eq = classify_and_solve(m);
        if (opt.certify) certify_or_throw(m, eq);
        csv = "regime,t0,t1,profit0,profit1,large_bound,eta0_bar,eta_r_bar,eta_r_underline,"
              "eta_r_tilde,certified\n";
        csv += to_string(eq.regime) + "," + csv_time(eq.times[0]) + "," + csv_time(eq.times[1]) +
               "," + csv_num(eq.profits[0]) + "," + csv_num(eq.profits[1]) + "," +
               csv_num(eq.thresholds.large_bound) + "," + csv_num(eq.thresholds.eta0_bar) + "," +
               csv_num(eq.thresholds.eta_r_bar) + "," + csv_num(eq.thresholds.eta_r_underline) +
               "," + csv_num(eq.thresholds.eta_r_tilde) + "," + (opt.certify ? "1" : "0") + "\n";
    }
    emit(opt, csv);
    return 0;
}

int run_regime_map(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const int n = std::max(2, opt.grid);
    std::vector<std::string> rows(static_cast<std::size_t>(n) * n);
    std::string error;
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double eta0 = opt.eta0_max * j / (n - 1);
            const double eta_i = (k + 0.5) / n;  // symmetric grid, interior shares
            try {
                std::string row;
                if (opt.plan == "shared") {
                    SharedMarket m = shared_market(cfg);
                    m.eta0 = eta0;
                    m.shares = {eta_i, 1.0 - eta_i};
                    const SharedEquilibrium eq = classify_and_solve_shared(m);
                    if (opt.certify) certify_or_throw(m, eq);
                    row = csv_num(eta_i) + "," + csv_num(eta0) + "," + to_string(eq.regime) +
                          "," + csv_time(eq.times[0]) + "," + csv_time(eq.times[1]);
                } else {
                    RolloverMarket m = rollover_market(cfg);
                    m.eta0 = eta0;
                    m.shares = {eta_i, 1.0 - eta_i};
                    const RolloverEquilibrium eq = classify_and_solve(m);
                    if (opt.certify) certify_or_throw(m, eq);
                    row = csv_num(eta_i) + "," + csv_num(eta0) + "," + to_string(eq.regime) +
                          "," + csv_time(eq.times[0]) + "," + csv_time(eq.times[1]);
                }
                rows[static_cast<std::size_t>(j) * n + k] = row;
            } catch (const std::exception& e) {
#pragma omp critical
                if (error.empty()) error = e.what();
            }
        }
    }
    if (!error.empty()) throw SolverError(error);
    std::string csv = "eta_i,eta0,regime,t0,t1\n";
    for (const std::string& r : rows) csv += r + "\n";
    emit(opt, csv);
    return 0;
}

int run_profit_curves(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const int n = std::max(2, opt.grid);
    auto solve_at = [&](double eta_i, double eta0, std::string& regime,
                        std::vector<ExtendedTime>& times, std::vector<double>& profits) {
        if (opt.plan == "shared") {
            SharedMarket m = shared_market(cfg);
            m.eta0 = eta0;
            m.shares = {eta_i, 1.0 - eta_i};
            const SharedEquilibrium eq = classify_and_solve_shared(m);
            if (opt.certify) certify_or_throw(m, eq);
            regime = to_string(eq.regime);
            times = eq.times;
            profits = eq.profits;
        } else {
            RolloverMarket m = rollover_market(cfg);
            m.eta0 = eta0;
            m.shares = {eta_i, 1.0 - eta_i};
            const RolloverEquilibrium eq = classify_and_solve(m);
            if (opt.certify) certify_or_throw(m, eq);
            regime = to_string(eq.regime);
            times = eq.times;
            profits = eq.profits;
        }
    };
    std::string csv = "axis,value,regime,t0,t1,profit0,profit1\n";
    std::string regime;
    std::vector<ExtendedTime> times;
    std::vector<double> profits;
    for (int k = 0; k < n; ++k) {  // equilibrium vs the leading share
        const double eta_i = (k + 0.5) / n;
        solve_at(eta_i, cfg.eta0, regime, times, profits);
        csv += "eta_i," + csv_num(eta_i) + "," + regime + "," + csv_time(times[0]) + "," +
               csv_time(times[1]) + "," + csv_num(profits[0]) + "," + csv_num(profits[1]) + "\n";
    }
    for (int k = 0; k < n; ++k) {  // equilibrium vs the new-user proportion
        const double eta0 = opt.eta0_max * k / (n - 1);
        solve_at(cfg.shares[0], eta0, regime, times, profits);
        csv += "eta0," + csv_num(eta0) + "," + regime + "," + csv_time(times[0]) + "," +
               csv_time(times[1]) + "," + csv_num(profits[0]) + "," + csv_num(profits[1]) + "\n";
    }
    emit(opt, csv);
    return 0;
}

int run_multi(const Options& opt) {
    const MarketConfig cfg = load(opt);
    RolloverMarket base = rollover_market(cfg);
    const std::size_t mm = base.shares.size();
    const double lo = opt.ec_min > 0.0 ? opt.ec_min : base.ec_h_r;
    const double hi = opt.ec_max > 0.0
                          ? opt.ec_max
                          : 0.99 * base.ec_h_r * (2.0 * base.lambda + base.discount) /
                                base.discount;
    const int n = std::max(2, std::min(opt.grid, 201));
    std::string csv = "ec_h";
    for (std::size_t i = 0; i < mm; ++i) csv += ",t" + std::to_string(i);
    for (std::size_t i = 0; i < mm; ++i) csv += ",profit" + std::to_string(i);
    csv += ",cycled\n";
    for (int k = 0; k < n; ++k) {
        RolloverMarket m = base;
        m.ec_h = lo + (hi - lo) * k / (n - 1);
        const MultiEquilibrium eq = solve_multi(m, 0.0, opt.t_max);
        csv += csv_num(m.ec_h);
        for (std::size_t i = 0; i < mm; ++i) csv += "," + csv_time(eq.times[i]);
        for (std::size_t i = 0; i < mm; ++i) csv += "," + csv_num(eq.profits[i]);
        csv += std::string(",") + (eq.cycled ? "1" : "0") + "\n";
    }
    emit(opt, csv);
    return 0;
}

int run_verify(const Options& opt) {
    const MarketConfig cfg = load(opt);
    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail = "") {
        std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name, detail.empty() ? "" : ": ",
                    detail.c_str());
        if (!ok) ++failures;
    };
    auto rel_ok = [](double a, double b, double tol) {
        return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
    };
    const bool all = opt.suite == "all";

    if (all || opt.suite == "costs") {
        const CostSummary cs = cost_summary(cfg.plan, cfg.light, cfg.heavy, cfg.alpha);
        report("rollover cost never exceeds traditional",
               cs.ec_heavy_rollover <= cs.ec_heavy + 1e-12);
        report("family aggregates match the per-category costs",
               rel_ok(cs.agg_d, 2.0 * cfg.alpha * cs.ec_heavy +
                                    2.0 * cfg.alpha * (1.0 - cfg.alpha) * cs.ec_light,
                      1e-12) &&
                   rel_ok(cs.agg_e, cfg.alpha * cfg.alpha * cs.ec_family_hh +
                                        2.0 * cfg.alpha * (1.0 - cfg.alpha) * cs.ec_family_hl,
                          1e-12));
        if (cfg.heavy.uniform() && cfg.heavy.min_usage == 0.0) {
            report("heavy-user closed forms match quadrature",
                   rel_ok(cs.ec_heavy,
                          uniform_closed_form::ec_heavy(cfg.plan, cfg.heavy.max_usage), 1e-8) &&
                       rel_ok(cs.ec_heavy_rollover,
                              uniform_closed_form::ec_heavy_rollover(cfg.plan,
                                                                     cfg.heavy.max_usage),
                              1e-8) &&
                       rel_ok(cs.ec_family_hh,
                              uniform_closed_form::ec_family_hh(cfg.plan, cfg.heavy.max_usage),
                              1e-8));
        }
    }
    if (all || opt.suite == "profits") {
        const RolloverMarket rm = rollover_market(cfg);
        const SharedMarket sm = shared_market(cfg);
        const ExtendedTime probes[] = {ExtendedTime::at(0.0), ExtendedTime::at(0.7),
                                       ExtendedTime::at(2.3), ExtendedTime::never()};
        bool quad_ok = true, cont_ok = true;
        for (const ExtendedTime& a : probes) {
            for (const ExtendedTime& b : probes) {
                for (std::size_t i = 0; i < 2; ++i) {
                    quad_ok = quad_ok &&
                              rel_ok(profit_rollover(rm, i, a, b).total,
                                     quadrature_profit_oracle(rm, i, a, b), 1e-7) &&
                              rel_ok(profit_shared(sm, i, a, b).total,
                                     quadrature_profit_oracle(sm, i, a, b), 1e-7);
                }
            }
            if (!a.is_never()) {
                for (std::size_t i = 0; i < 2; ++i) {
                    cont_ok = cont_ok &&
                              rel_ok(profit_rollover(rm, i, a, a, ProfitBranch::early).total,
                                     profit_rollover(rm, i, a, a, ProfitBranch::late).total,
                                     1e-9) &&
                              rel_ok(profit_shared(sm, i, a, a, ProfitBranch::early).total,
                                     profit_shared(sm, i, a, a, ProfitBranch::late).total, 1e-9);
                }
            }
        }
        report("closed profits match the quadrature oracle", quad_ok);
        report("profit branches agree at equal upgrade times", cont_ok);
    }
    if (all || opt.suite == "nash") {
        try {
            const RolloverMarket rm = rollover_market(cfg);
            certify_or_throw(rm, classify_and_solve(rm));
            report("rollover equilibrium passes the deviation check", true);
        } catch (const std::exception& e) {
            report("rollover equilibrium passes the deviation check", false, e.what());
        }
        try {
            const SharedMarket sm = shared_market(cfg);
            certify_or_throw(sm, classify_and_solve_shared(sm));
            report("shared equilibrium passes the deviation check", true);
        } catch (const std::exception& e) {
            report("shared equilibrium passes the deviation check", false, e.what());
        }
        try {
            const RolloverMarket rm = rollover_market(cfg);
            const MultiEquilibrium eq = solve_multi(rm);
            const auto grid = deviation_grid(eq.grid_step, eq.t_max);
            auto profit = [&](std::size_t i, const std::vector<ExtendedTime>& p) {
                return multi_profit(rm, i, p);
            };
            report("iterated best response passes the deviation check",
                   check_epsilon_nash(profit, eq.times, grid).passed);
        } catch (const std::exception& e) {
            report("iterated best response passes the deviation check", false, e.what());
        }
    }
    if (failures > 0) {
        std::printf("%d check(s) failed\n", failures);
        return 4;
    }
    return 0;
}

int run_simulate(const Options& opt) {
    const MarketConfig cfg = load(opt);
    const ExtendedTime t0 = parse_time(opt.t0), t1 = parse_time(opt.t1);
    SimConfig sim;
    sim.seed = opt.seed;
    sim.dt = opt.dt;
    sim.months = opt.months > 0
                     ? opt.months
                     : static_cast<int>(std::ceil(40.0 / cfg.discount / opt.dt)) + 8;
    sim.replications = opt.reps;
    const SimResult r = opt.plan == "shared" ? simulate_shared(cfg, sim, t0, t1)
                                             : simulate_rollover(cfg, sim, t0, t1);
    std::string csv = "rep,provider,profit,n_switched,n_new\n";
    for (const RepRecord& rec : r.records)
        csv += std::to_string(rec.rep) + "," + std::to_string(rec.provider) + "," +
               csv_num(rec.profit) + "," + csv_num(rec.n_switched) + "," + csv_num(rec.n_new) +
               "\n";
    emit(opt, csv);
    for (std::size_t p = 0; p < r.providers.size(); ++p)
        std::fprintf(stderr, "provider %zu: mean %s se %s\n", p,
                     csv_num(r.providers[p].mean).c_str(), csv_num(r.providers[p].se).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"upgrade-timing engine for rollover and shared data plans"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "market configuration (JSON)");
        cmd->add_option("--plan", opt.plan, "rollover|shared")
            ->check(CLI::IsMember({"rollover", "shared"}));
        cmd->add_option("--out", opt.out_path, "write CSV here instead of stdout");
        cmd->add_option("--grid", opt.grid, "sweep resolution");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_flag("--certify", opt.certify, "run the deviation check on every result");
        return cmd;
    };

    add_common(app.add_subcommand("costs", "expected monthly costs per plan and category"));
    auto* trajectory = add_common(app.add_subcommand("trajectory", "subscriber counts over time"));
    trajectory->add_option("--t0", opt.t0, "provider 0 upgrade time (or inf)");
    trajectory->add_option("--t1", opt.t1, "provider 1 upgrade time (or inf)");
    trajectory->add_option("--t-max", opt.t_max, "end of the sampled horizon");
    auto* profit = add_common(app.add_subcommand("profit", "discounted profits at given times"));
    profit->add_option("--t0", opt.t0, "provider 0 upgrade time (or inf)");
    profit->add_option("--t1", opt.t1, "provider 1 upgrade time (or inf)");
    auto* br = add_common(app.add_subcommand("best-response", "optimal reply to a rival time"));
    br->add_option("--rival", opt.rival, "rival upgrade time (or inf)");
    add_common(app.add_subcommand("equilibrium", "regime label, times, profits, thresholds"));
    auto* rmap = add_common(app.add_subcommand("regime-map", "regime per (share, eta0) cell"));
    rmap->add_option("--eta0-max", opt.eta0_max, "top of the eta0 sweep");
    auto* curves =
        add_common(app.add_subcommand("profit-curves", "equilibrium profits vs share and eta0"));
    curves->add_option("--eta0-max", opt.eta0_max, "top of the eta0 sweep");
    auto* multi = add_common(
        app.add_subcommand("multi", "iterated best response over a cost-reduction sweep"));
    multi->add_option("--ec-min", opt.ec_min, "lowest traditional heavy-user cost");
    multi->add_option("--ec-max", opt.ec_max, "highest traditional heavy-user cost");
    multi->add_option("--t-max", opt.t_max, "cap of the timing grid");
    auto* verify = add_common(app.add_subcommand("verify", "oracle and deviation-check suites"));
    verify->add_option("--suite", opt.suite, "costs|profits|nash|all")
        ->check(CLI::IsMember({"costs", "profits", "nash", "all"}));
    auto* sim = add_common(app.add_subcommand("simulate", "Monte Carlo per-replication profits"));
    sim->add_option("--t0", opt.t0, "provider 0 upgrade time (or inf)");
    sim->add_option("--t1", opt.t1, "provider 1 upgrade time (or inf)");
    sim->add_option("--reps", opt.reps, "number of replications");
    sim->add_option("--months", opt.months, "number of dt windows in the horizon");
    sim->add_option("--dt", opt.dt, "window length in model-months");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "costs") return run_costs(opt);
        if (cmd == "trajectory") return run_trajectory(opt);
        if (cmd == "profit") return run_profit(opt);
        if (cmd == "best-response") return run_best_response(opt);
        if (cmd == "equilibrium") return run_equilibrium(opt);
        if (cmd == "regime-map") return run_regime_map(opt);
        if (cmd == "profit-curves") return run_profit_curves(opt);
        if (cmd == "multi") return run_multi(opt);
        if (cmd == "verify") return run_verify(opt);
        if (cmd == "simulate") return run_simulate(opt);
        std::fprintf(stderr, "unknown command %s\n", cmd.c_str());
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
