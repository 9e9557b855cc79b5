#pragma once

#include "wsp/rollover_game.hpp"

namespace wsp {

// Symmetric-provider condition for all upgrading immediately; independent of
// the provider count (the per-provider population factors cancel).
bool symmetric_immediate_condition(const RolloverMarket& m);

// Discounted rollover profit for provider i under any number of providers.
// While a subset has upgraded, each non-upgraded provider's heavy users decay
// at rate lambda and flow to the earliest upgrader (split equally on a tie);
// the new pool decays at lambda0 and splits equally among everyone already
// upgraded. Reduces to the duopoly closed form for two providers.
double multi_profit(const RolloverMarket& m, std::size_t i,
                    const std::vector<ExtendedTime>& times);

struct MultiEquilibrium {
    std::vector<ExtendedTime> times;
    std::vector<double> profits;
    double grid_step = 0.0;
    double t_max = 0.0;
    double max_deviation_gain = 0.0;
    bool cycled = false;  // best-response iteration revisited a profile
};

// Iterated best response over the grid {0, step, ..., t_max, never} starting
// from everyone upgrading at 0, updating providers in descending share order.
// step or t_max of 0 selects the documented defaults.
MultiEquilibrium solve_multi(const RolloverMarket& m, double grid_step = 0.0, double t_max = 0.0);

}  // namespace wsp
