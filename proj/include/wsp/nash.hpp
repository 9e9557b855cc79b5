#pragma once

#include <functional>
#include <vector>

#include "wsp/market.hpp"

namespace wsp {

// Profit of one provider under a full timing profile.
using ProfileProfit = std::function<double(std::size_t, const std::vector<ExtendedTime>&)>;

struct DeviationCheck {
    bool passed = true;
    double epsilon = 0.0;        // absolute tolerance used
    double max_gain = 0.0;       // best deviation gain found (may be <= 0)
    std::size_t provider = 0;    // provider achieving max_gain
    ExtendedTime deviation;      // its best deviating time
};

// Candidate deviation times {0, step, ..., t_max, never}.
std::vector<ExtendedTime> deviation_grid(double step, double t_max);

// Verifies that no provider can gain more than eps_rel * max|profit| by
// deviating to any grid time. The parallel variant partitions the grid across
// threads and reduces deterministically.
DeviationCheck check_epsilon_nash_serial(const ProfileProfit& profit,
                                         const std::vector<ExtendedTime>& profile,
                                         const std::vector<ExtendedTime>& grid,
                                         double eps_rel = 1e-6);
DeviationCheck check_epsilon_nash(const ProfileProfit& profit,
                                  const std::vector<ExtendedTime>& profile,
                                  const std::vector<ExtendedTime>& grid, double eps_rel = 1e-6);

}  // namespace wsp
