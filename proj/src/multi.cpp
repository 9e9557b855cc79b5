#include "wsp/multi.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wsp/nash.hpp"

namespace wsp {

bool symmetric_immediate_condition(const RolloverMarket& m) {
    const double s = m.discount;
    return m.ec_h - m.ec_h_r * (m.lambda + s) / s < m.eta0 * m.ec_h_r * m.lambda0 / s;
}

namespace {

double disc(double s, double a, double b) {
    if (b <= a) return 0.0;
    const double upper = std::isinf(b) ? 0.0 : std::exp(-s * b);
    return (std::exp(-s * a) - upper) / s;
}

double decay(double s, double a, double b, double r) {
    // integral of e^{-r(t-a)} e^{-St} over [a, b]
    if (b <= a) return 0.0;
    const double rs = r + s;
    const double upper = std::isinf(b) ? 0.0 : std::exp(-rs * (b - a));
    return std::exp(-s * a) * (1.0 - upper) / rs;
}

}  // namespace

double multi_profit(const RolloverMarket& m, std::size_t i,
                    const std::vector<ExtendedTime>& times) {
    if (times.size() != m.shares.size())
        throw std::invalid_argument("multi_profit: one upgrade time per provider required");
    const std::size_t mm = times.size();
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ch = m.ec_h;
    const double cr = m.ec_h_r;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> rem(mm);
    for (std::size_t j = 0; j < mm; ++j) rem[j] = 2.0 * m.alpha * m.n_i(j);
    double pool = 2.0 * m.alpha * m.n0();
    double acquired = 0.0;

    std::vector<double> events;
    for (const auto& t : times)
        if (!t.is_never()) events.push_back(t.value());
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    if (events.empty()) return rem[i] * ch / s;

    // laggards' churners flow to the earliest upgraders only; the new pool
    // splits equally among everyone already upgraded
    const double t_first = events.front();
    std::size_t n_first = 0;
    for (const auto& t : times)
        if (!t.is_never() && t.value() == t_first) ++n_first;
    const bool i_first = !times[i].is_never() && times[i].value() == t_first;

    std::vector<bool> upgraded(mm, false);
    auto in = [&](std::size_t j, double t) {
        return !times[j].is_never() && times[j].value() <= t;
    };

    double revenue = 0.0;
    double a = 0.0;
    for (std::size_t w = 0; w <= events.size(); ++w) {
        const double b = w < events.size() ? events[w] : inf;
        std::size_t k = 0;
        for (std::size_t j = 0; j < mm; ++j) {
            upgraded[j] = in(j, a);
            if (upgraded[j]) ++k;
        }
        if (b > a) {
            if (k == 0) {
                revenue += rem[i] * ch * disc(s, a, b);
            } else if (upgraded[i]) {
                double flow = (rem[i] + acquired) * disc(s, a, b);
                if (i_first)
                    for (std::size_t j = 0; j < mm; ++j)
                        if (!upgraded[j])
                            flow += rem[j] / n_first * (disc(s, a, b) - decay(s, a, b, la));
                flow += pool / k * (disc(s, a, b) - decay(s, a, b, l0));
                revenue += cr * flow;
            } else {
                revenue += ch * rem[i] * decay(s, a, b, la);
            }
            if (!std::isinf(b) && k > 0) {
                const double keep = std::exp(-la * (b - a));
                const double keep0 = std::exp(-l0 * (b - a));
                for (std::size_t j = 0; j < mm; ++j) {
                    if (upgraded[j]) continue;
                    const double departed = rem[j] * (1.0 - keep);
                    rem[j] *= keep;
                    if (i_first) acquired += departed / n_first;
                }
                if (upgraded[i]) acquired += pool * (1.0 - keep0) / k;
                pool *= keep0;
            }
        }
        a = b;
    }
    return revenue;
}

MultiEquilibrium solve_multi(const RolloverMarket& m, double grid_step, double t_max) {
    m.validate();
    const std::size_t mm = m.shares.size();
    MultiEquilibrium res;
    res.grid_step = grid_step > 0.0 ? grid_step
                                    : default_grid_step(m.discount, m.lambda, m.lambda0);
    res.t_max = t_max > 0.0 ? t_max : default_t_max(m);
    const std::vector<ExtendedTime> grid = deviation_grid(res.grid_step, res.t_max);

    auto best_on_grid = [&](std::size_t i, std::vector<ExtendedTime> profile) {
        const long n = static_cast<long>(grid.size());
        std::vector<double> profits(grid.size());
#pragma omp parallel for schedule(static) firstprivate(profile)
        for (long k = 0; k < n; ++k) {
            profile[i] = grid[static_cast<std::size_t>(k)];
            profits[static_cast<std::size_t>(k)] = multi_profit(m, i, profile);
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < grid.size(); ++k)
            if (profits[k] > profits[best]) best = k;
        return grid[best];
    };

    auto key = [](const std::vector<ExtendedTime>& p) {
        std::ostringstream os;
        for (const auto& t : p) os << t.value_or_inf() << ',';
        return os.str();
    };

    // update in descending share order so the equilibrium selected among
    // asymmetric candidates depends on shares, not on provider labels
    std::vector<std::size_t> order(mm);
    for (std::size_t i = 0; i < mm; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m.shares[a] > m.shares[b]; });

    std::vector<ExtendedTime> profile(mm, ExtendedTime::at(0.0));
    std::set<std::string> seen{key(profile)};
    std::vector<std::vector<ExtendedTime>> visited{profile};
    bool converged = false;
    for (int pass = 0; pass < 200 && !converged; ++pass) {
        bool changed = false;
        for (std::size_t i : order) {
            const ExtendedTime br = best_on_grid(i, profile);
            if (!(br == profile[i])) {
                profile[i] = br;
                changed = true;
                if (!seen.insert(key(profile)).second) {
                    res.cycled = true;
                } else {
                    visited.push_back(profile);
                }
                break;  // restart the pass after any change
            }
        }
        if (res.cycled) break;
        if (!changed) converged = true;
    }

    auto profit_fn = [&](std::size_t i, const std::vector<ExtendedTime>& p) {
        return multi_profit(m, i, p);
    };
    auto certify = [&](const std::vector<ExtendedTime>& p) {
        return check_epsilon_nash(profit_fn, p, grid);
    };

    DeviationCheck check;
    if (converged) {
        check = certify(profile);
    } else {
        // cycle: keep the best certified profile seen along the way; all-never
        // is always worth checking as a candidate (the seed is visited[0])
        visited.emplace_back(mm, ExtendedTime::never());
        check.passed = false;
        check.max_gain = std::numeric_limits<double>::infinity();
        for (const auto& p : visited) {
            const DeviationCheck c = certify(p);
            if (c.max_gain < check.max_gain) {
                check = c;
                profile = p;
            }
        }
    }
    if (!check.passed) {
        std::ostringstream os;
        os << "solve_multi: no epsilon-Nash profile on the grid"
           << (res.cycled ? " (best-response iteration cycled)" : "")
           << "; minimal deviation gain " << check.max_gain << " exceeds epsilon "
           << check.epsilon;
        throw SolverError(os.str());
    }
    res.times = profile;
    res.profits.resize(mm);
    for (std::size_t i = 0; i < mm; ++i) res.profits[i] = multi_profit(m, i, profile);
    res.max_deviation_gain = check.max_gain;
    return res;
}

}  // namespace wsp
