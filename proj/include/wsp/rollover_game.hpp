#pragma once

#include <string>

#include "wsp/profit.hpp"

namespace wsp {

// Thrown when a solver leaves its supported parameter range or a threshold
// root cannot be bracketed.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Regime {
    mild_reduction_immediate,
    large_eta0_immediate,
    medium_asymmetric,
    medium_both_immediate,
    small_asymmetric,
    small_no_upgrade,
};

std::string to_string(Regime r);

// Threshold values behind the rollover-game regime classification. All share
// thresholds are clamped to [0, 1].
struct RegimeThresholds {
    double large_bound = 0.0;      // new-user bound above which both upgrade at 0
    double eta0_bar = 0.0;         // boundary between the small and medium regimes
    double eta_r_bar = 0.0;        // small regime: no-upgrade share band edge
    double eta_r_underline = 0.0;  // medium regime: asymmetric share band edge
    double eta_r_tilde = 0.0;      // share at which first- and late-upgrade profits tie
};

struct RolloverEquilibrium {
    std::vector<ExtendedTime> times;
    std::vector<double> profits;
    Regime regime = Regime::mild_reduction_immediate;
    RegimeThresholds thresholds;
};

// Marginal condition for delaying when the rival has not yet upgraded: the
// first-order derivative of the late-branch profit at matching times changes
// sign where this function does (as a function of eta_i, with eta_j = 1-eta_i).
double late_start_slope(const RolloverMarket& m, std::size_t i);

RegimeThresholds regime_thresholds(const RolloverMarket& m);

// Best upgrade time for provider i against a fixed rival time. Interior
// stationary points of the early branch are found by bracketed root scans; all
// candidates (0, interior roots, t_j, delayed time) are compared by profit.
ExtendedTime best_response_rollover(const RolloverMarket& m, std::size_t i,
                                    const ExtendedTime& t_j);

RolloverEquilibrium classify_and_solve(const RolloverMarket& m);

// Share threshold below which provider i gains from the upgrade relative to
// standing pat, scanning eta_i with eta_j = 1 - eta_i. Returns 1 if the
// upgrade pays off at every share.
double profit_threshold(const RolloverMarket& m, std::size_t i);

// Deterministic timing grid used by grid oracles and deviation certificates.
double default_grid_step(double discount, double lambda, double lambda0);
double default_t_max(const RolloverMarket& m);

}  // namespace wsp
