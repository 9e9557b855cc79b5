#include "wsp/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wsp {

void SimConfig::validate(double discount) const {
    if (!(months > 0) || !(dt > 0.0))
        throw std::invalid_argument("sim: months and dt must be positive");
    if (replications < 2) throw std::invalid_argument("sim: need at least 2 replications");
    if (!(horizon() >= 40.0 / discount))
        throw std::invalid_argument("sim: horizon too short (need months*dt >= 40/S)");
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed + stream
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

UsageSampler::UsageSampler(const UsageModel& usage) {
    usage.validate();
    uniform_ = usage.uniform();
    lo_ = usage.min_usage;
    hi_ = usage.max_usage;
    if (uniform_) return;
    double total = 0.0;
    for (const auto& [u, f] : usage.density_knots) {
        u_.push_back(u);
        f_.push_back(f);
    }
    cdf_.assign(u_.size(), 0.0);
    for (std::size_t k = 1; k < u_.size(); ++k) {
        total += 0.5 * (f_[k - 1] + f_[k]) * (u_[k] - u_[k - 1]);
        cdf_[k] = total;
    }
    for (std::size_t k = 0; k < u_.size(); ++k) {
        cdf_[k] /= total;
        f_[k] /= total;
    }
}

namespace {

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double exp_draw(std::mt19937_64& rng, double rate) { return -std::log1p(-unit(rng)) / rate; }

// discounted length of [a, b)
double disc(double s, double a, double b) {
    if (b <= a) return 0.0;
    return (std::exp(-s * a) - std::exp(-s * b)) / s;
}

}  // namespace

double UsageSampler::sample(std::mt19937_64& rng) const {
    const double x = unit(rng);
    if (uniform_) return lo_ + (hi_ - lo_) * x;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    std::size_t j = it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
    if (j == 0) j = 1;
    --j;  // segment [u_j, u_{j+1}]
    const double m = x - cdf_[j];
    const double len = u_[j + 1] - u_[j];
    const double f1 = f_[j];
    const double slope = (f_[j + 1] - f1) / len;
    double w;
    if (std::fabs(slope) < 1e-14) {
        w = f1 > 0.0 ? m / f1 : 0.0;
    } else {
        w = (-f1 + std::sqrt(std::max(f1 * f1 + 2.0 * slope * m, 0.0))) / slope;
    }
    return u_[j] + std::clamp(w, 0.0, len);
}

namespace {

struct RepAccum {
    std::array<double, 2> profit{};
    std::array<double, 2> switched{};
    std::array<double, 2> fresh{};
    std::vector<double> counts;  // provider-major, one slot per checkpoint
};

struct Scenario {
    const MarketConfig* cfg = nullptr;
    const SimConfig* sim = nullptr;
    std::array<double, 2> t{};  // upgrade times, inf for never
    double horizon = 0.0;
    int total_months = 0;
    int checkpoints = 0;
};

Scenario make_scenario(const MarketConfig& cfg, const SimConfig& sim, const ExtendedTime& t_0,
                       const ExtendedTime& t_1) {
    cfg.validate();
    if (cfg.shares.size() != 2) throw std::invalid_argument("simulate: two providers required");
    sim.validate(cfg.discount);
    Scenario sc;
    sc.cfg = &cfg;
    sc.sim = &sim;
    sc.t = {t_0.value_or_inf(), t_1.value_or_inf()};
    sc.horizon = sim.horizon();
    sc.total_months = static_cast<int>(std::ceil(sc.horizon - 1e-12));
    sc.checkpoints = sim.months + 1;
    return sc;
}

// Destination once the pool clock rings at tau: the sole upgraded provider, or
// a fair coin if both have upgraded.
int pool_destination(const Scenario& sc, double tau, std::mt19937_64& rng) {
    const double lag = std::max(sc.t[0], sc.t[1]);
    if (tau < lag) return sc.t[0] <= sc.t[1] ? 0 : 1;
    return unit(rng) < 0.5 ? 0 : 1;
}

void add_counts(const Scenario& sc, RepAccum& acc, int provider, double from, double weight) {
    if (provider < 0) return;
    const double dt = sc.sim->dt;
    int c0 = from <= 0.0 ? 0 : static_cast<int>(std::ceil(from / dt - 1e-12));
    for (int c = c0; c < sc.checkpoints; ++c)
        acc.counts[static_cast<std::size_t>(provider) * sc.checkpoints + c] += weight;
}

// One heavy user: origin is the initial provider, or -1 for the untapped pool.
void rollover_user(const Scenario& sc, std::mt19937_64& rng, int origin, double w,
                   const UsageSampler& heavy, RepAccum& acc) {
    const auto& plan = sc.cfg->plan;
    const double s = sc.cfg->discount;
    const double inf = std::numeric_limits<double>::infinity();
    double tau_s = inf;  // provider-change (or activation) time
    int pre = origin, post = origin;
    double start = 0.0;
    if (origin >= 0) {
        const int other = 1 - origin;
        if (sc.t[other] < sc.t[origin]) {
            const double tau = sc.t[other] + exp_draw(rng, sc.cfg->rates.lambda);
            if (tau < sc.t[origin] && tau < sc.horizon) {
                tau_s = tau;
                post = other;
                acc.switched[static_cast<std::size_t>(other)] += w;
            }
        }
    } else {
        const double lead = std::min(sc.t[0], sc.t[1]);
        if (!(lead < sc.horizon)) return;
        const double tau = lead + exp_draw(rng, sc.cfg->rates.lambda0);
        if (!(tau < sc.horizon)) return;
        post = pool_destination(sc, tau, rng);
        tau_s = tau;
        start = tau;
        acc.fresh[static_cast<std::size_t>(post)] += w;
    }

    add_counts(sc, acc, pre, 0.0, w);
    if (post != pre) {
        add_counts(sc, acc, pre, tau_s, -w);
        add_counts(sc, acc, post, tau_s, w);
    }

    // monthly billing; the bill is spread as a rate over the month so partial
    // segments prorate, and the rollover bank carries last month's usage draw
    double prev_u = heavy.sample(rng);  // stand-in for the unobserved prior month
    for (int m = static_cast<int>(std::floor(start)); m < sc.total_months; ++m) {
        const double a = std::max(static_cast<double>(m), start);
        const double b = std::min(static_cast<double>(m) + 1.0, sc.horizon);
        if (b <= a) continue;
        const double u = heavy.sample(rng);
        std::array<double, 4> cuts{a, b, b, b};
        std::size_t nc = 2;
        if (tau_s > a && tau_s < b) cuts[nc++] = tau_s;
        if (pre >= 0 && sc.t[pre] > a && sc.t[pre] < b) cuts[nc++] = sc.t[pre];
        std::sort(cuts.begin(), cuts.begin() + static_cast<long>(nc));
        const double bank = std::max(plan.quota - prev_u, 0.0);
        for (std::size_t k = 0; k + 1 < nc; ++k) {
            const double x = cuts[k], y = cuts[k + 1];
            if (y <= x) continue;
            const int p = x < tau_s ? pre : post;
            if (p < 0) continue;
            const bool roll = x >= sc.t[p];
            const double over = std::max(u - plan.quota - (roll ? bank : 0.0), 0.0);
            acc.profit[static_cast<std::size_t>(p)] +=
                w * (plan.lump_fee + plan.overage_price * over) * disc(s, x, y);
        }
        prev_u = u;
    }
}

RepAccum rollover_rep(const Scenario& sc, int rep) {
    std::mt19937_64 rng(split_seed(sc.sim->seed, static_cast<std::uint64_t>(rep)));
    const UsageSampler heavy(sc.cfg->heavy);
    RepAccum acc;
    acc.counts.assign(2 * static_cast<std::size_t>(sc.checkpoints), 0.0);
    for (int origin = -1; origin < 2; ++origin) {
        const double share = origin < 0 ? sc.cfg->eta0 : sc.cfg->shares[static_cast<std::size_t>(origin)];
        const double count = 2.0 * sc.cfg->alpha * share * sc.cfg->n;
        if (count <= 0.0) continue;
        const long users = std::max(1L, std::lround(count));
        const double w = count / static_cast<double>(users);
        for (long k = 0; k < users; ++k) rollover_user(sc, rng, origin, w, heavy, acc);
    }
    return acc;
}

// One family; origin 0/1 for pure, 2 for mixed, 3 for a new family.
void shared_family(const Scenario& sc, std::mt19937_64& rng, int origin, double w,
                   const UsageSampler& heavy, const UsageSampler& light, RepAccum& acc) {
    const auto& plan = sc.cfg->plan;
    const double s = sc.cfg->discount;
    const double alpha = sc.cfg->alpha;
    const double inf = std::numeric_limits<double>::infinity();

    // member classes by random pairing
    const double r = unit(rng);
    bool heavy0, heavy1;
    if (r < alpha * alpha) {
        heavy0 = heavy1 = true;
    } else if (r < alpha * alpha + 2.0 * alpha * (1.0 - alpha)) {
        heavy0 = unit(rng) < 0.5;
        heavy1 = !heavy0;
    } else {
        return;  // light-light families pay the same either way; not modeled
    }

    std::array<int, 2> member{origin, origin};
    if (origin == 2) member = {0, 1};

    double tau_a = inf;  // shared-plan adoption time
    int q = -1;          // pooling provider
    if (origin == 0 || origin == 1) {
        const int other = 1 - origin;
        if (sc.t[other] < sc.t[origin]) {
            const double tau = sc.t[other] + exp_draw(rng, sc.cfg->rates.lambda);
            if (tau < sc.t[origin] && tau < sc.horizon) {
                tau_a = tau;
                q = other;
                acc.switched[static_cast<std::size_t>(other)] += w;
            }
        }
        if (q < 0 && sc.t[origin] < sc.horizon) {
            tau_a = sc.t[origin];
            q = origin;
        }
    } else if (origin == 2) {
        const double lead = std::min(sc.t[0], sc.t[1]);
        if (lead < sc.horizon) {
            const double tau = lead + exp_draw(rng, sc.cfg->rates.lambda);
            if (tau < sc.horizon) {
                const double lag = std::max(sc.t[0], sc.t[1]);
                q = tau < lag ? (sc.t[0] <= sc.t[1] ? 0 : 1) : (unit(rng) < 0.5 ? 0 : 1);
                tau_a = tau;
                acc.switched[static_cast<std::size_t>(q)] += w;
            }
        }
    } else {
        const double lead = std::min(sc.t[0], sc.t[1]);
        if (!(lead < sc.horizon)) return;
        const double tau = lead + exp_draw(rng, sc.cfg->rates.lambda0);
        if (!(tau < sc.horizon)) return;
        q = pool_destination(sc, tau, rng);
        tau_a = tau;
        acc.fresh[static_cast<std::size_t>(q)] += w;
    }

    if (q >= 0) add_counts(sc, acc, q, tau_a, w);
    if (origin == 3 && q < 0) return;

    const double start = origin == 3 ? tau_a : 0.0;
    for (int m = static_cast<int>(std::floor(start)); m < sc.total_months; ++m) {
        const double a = std::max(static_cast<double>(m), start);
        const double b = std::min(static_cast<double>(m) + 1.0, sc.horizon);
        if (b <= a) continue;
        const double u0 = (heavy0 ? heavy : light).sample(rng);
        const double u1 = (heavy1 ? heavy : light).sample(rng);
        const double split = std::clamp(tau_a, a, b);
        if (split > a) {
            // members billed individually by their own providers
            const double d = disc(s, a, split);
            acc.profit[static_cast<std::size_t>(member[0])] +=
                w * (plan.lump_fee + plan.overage_price * std::max(u0 - plan.quota, 0.0)) * d;
            acc.profit[static_cast<std::size_t>(member[1])] +=
                w * (plan.lump_fee + plan.overage_price * std::max(u1 - plan.quota, 0.0)) * d;
        }
        if (split < b) {
            const double over = std::max(u0 + u1 - 2.0 * plan.quota, 0.0);
            acc.profit[static_cast<std::size_t>(q)] +=
                w * (2.0 * plan.lump_fee + plan.overage_price * over) * disc(s, split, b);
        }
    }
}

RepAccum shared_rep(const Scenario& sc, int rep) {
    std::mt19937_64 rng(split_seed(sc.sim->seed, static_cast<std::uint64_t>(rep)));
    const UsageSampler heavy(sc.cfg->heavy);
    const UsageSampler light(sc.cfg->light);
    const double e0 = sc.cfg->shares[0];
    const double e1 = sc.cfg->shares[1];
    RepAccum acc;
    acc.counts.assign(2 * static_cast<std::size_t>(sc.checkpoints), 0.0);
    {
        const double count = sc.cfg->n;
        if (count > 0.0) {
            const long fams = std::max(1L, std::lround(count));
            const double w = count / static_cast<double>(fams);
            for (long k = 0; k < fams; ++k) {
                const double r = unit(rng);
                const int origin = r < e0 * e0 ? 0 : (r < e0 * e0 + e1 * e1 ? 1 : 2);
                shared_family(sc, rng, origin, w, heavy, light, acc);
            }
        }
    }
    const double pool = sc.cfg->eta0 * sc.cfg->n;
    if (pool > 0.0) {
        const long fams = std::max(1L, std::lround(pool));
        const double w = pool / static_cast<double>(fams);
        for (long k = 0; k < fams; ++k) shared_family(sc, rng, 3, w, heavy, light, acc);
    }
    return acc;
}

template <class Rep>
SimResult run(const Scenario& sc, const Rep& one_rep, bool parallel) {
    const int reps = sc.sim->replications;
    std::vector<RepAccum> out(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 0; k < reps; ++k) out[static_cast<std::size_t>(k)] = one_rep(sc, k);

    SimResult res;
    res.providers.resize(2);
    res.checkpoints.resize(static_cast<std::size_t>(sc.checkpoints));
    for (int c = 0; c < sc.checkpoints; ++c)
        res.checkpoints[static_cast<std::size_t>(c)] = c * sc.sim->dt;
    res.count_mean.assign(2, std::vector<double>(static_cast<std::size_t>(sc.checkpoints), 0.0));
    res.count_se = res.count_mean;

    for (std::size_t p = 0; p < 2; ++p) {
        double sum = 0.0, sumsq = 0.0, sw = 0.0, nw = 0.0;
        for (int k = 0; k < reps; ++k) {
            const auto& a = out[static_cast<std::size_t>(k)];
            sum += a.profit[p];
            sumsq += a.profit[p] * a.profit[p];
            sw += a.switched[p];
            nw += a.fresh[p];
            res.records.push_back({k, p, a.profit[p], a.switched[p], a.fresh[p]});
        }
        auto& est = res.providers[p];
        est.mean = sum / reps;
        const double var = std::max(0.0, (sumsq - sum * sum / reps) / (reps - 1));
        est.se = std::sqrt(var / reps);
        est.n_switched = sw / reps;
        est.n_new = nw / reps;
        for (int c = 0; c < sc.checkpoints; ++c) {
            double cs = 0.0, css = 0.0;
            for (int k = 0; k < reps; ++k) {
                const double v =
                    out[static_cast<std::size_t>(k)].counts[p * static_cast<std::size_t>(sc.checkpoints) +
                                                            static_cast<std::size_t>(c)];
                cs += v;
                css += v * v;
            }
            res.count_mean[p][static_cast<std::size_t>(c)] = cs / reps;
            const double cvar = std::max(0.0, (css - cs * cs / reps) / (reps - 1));
            res.count_se[p][static_cast<std::size_t>(c)] = std::sqrt(cvar / reps);
        }
    }
    return res;
}

}  // namespace

SimResult simulate_rollover(const MarketConfig& cfg, const SimConfig& sim, const ExtendedTime& t_0,
                            const ExtendedTime& t_1, bool parallel) {
    const Scenario sc = make_scenario(cfg, sim, t_0, t_1);
    return run(sc, [](const Scenario& s, int k) { return rollover_rep(s, k); }, parallel);
}

SimResult simulate_shared(const MarketConfig& cfg, const SimConfig& sim, const ExtendedTime& t_0,
                          const ExtendedTime& t_1, bool parallel) {
    const Scenario sc = make_scenario(cfg, sim, t_0, t_1);
    return run(sc, [](const Scenario& s, int k) { return shared_rep(s, k); }, parallel);
}

}  // namespace wsp
