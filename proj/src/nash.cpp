#include "wsp/nash.hpp"

#include <algorithm>
#include <cmath>

namespace wsp {

std::vector<ExtendedTime> deviation_grid(double step, double t_max) {
    if (!(step > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("deviation_grid: step and t_max must be positive");
    std::vector<ExtendedTime> grid;
    grid.reserve(static_cast<std::size_t>(t_max / step) + 2);
    for (double t = 0.0; t <= t_max + 0.5 * step; t += step) grid.push_back(ExtendedTime::at(t));
    grid.push_back(ExtendedTime::never());
    return grid;
}

namespace {

DeviationCheck run_check(const ProfileProfit& profit, const std::vector<ExtendedTime>& profile,
                         const std::vector<ExtendedTime>& grid, double eps_rel, bool parallel) {
    DeviationCheck res;
    double scale = 0.0;
    std::vector<double> base(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        base[i] = profit(i, profile);
        scale = std::max(scale, std::fabs(base[i]));
    }
    res.epsilon = eps_rel * std::max(1.0, scale);
    res.max_gain = -std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < profile.size(); ++i) {
        const long n = static_cast<long>(grid.size());
        std::vector<double> gains(grid.size());
#pragma omp parallel for schedule(static) if (parallel)
        for (long k = 0; k < n; ++k) {
            std::vector<ExtendedTime> dev = profile;
            dev[i] = grid[static_cast<std::size_t>(k)];
            gains[static_cast<std::size_t>(k)] = profit(i, dev) - base[i];
        }
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (gains[k] > res.max_gain) {
                res.max_gain = gains[k];
                res.provider = i;
                res.deviation = grid[k];
            }
        }
    }
    res.passed = res.max_gain <= res.epsilon;
    return res;
}

}  // namespace

DeviationCheck check_epsilon_nash_serial(const ProfileProfit& profit,
                                         const std::vector<ExtendedTime>& profile,
                                         const std::vector<ExtendedTime>& grid, double eps_rel) {
    return run_check(profit, profile, grid, eps_rel, false);
}

DeviationCheck check_epsilon_nash(const ProfileProfit& profit,
                                  const std::vector<ExtendedTime>& profile,
                                  const std::vector<ExtendedTime>& grid, double eps_rel) {
    return run_check(profit, profile, grid, eps_rel, true);
}

}  // namespace wsp
