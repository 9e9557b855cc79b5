#include "wsp/rollover_game.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wsp/roots.hpp"

namespace wsp {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// (1/kappa)^{(r+S)/(lambda-lambda0)}, clamped as in the profit formulas
double fac(double kappa, double r, double s, double la, double l0) {
    if (std::isinf(kappa)) return 0.0;
    if (!(kappa > 1.0)) return 1.0;
    return std::pow(1.0 / kappa, (r + s) / (la - l0));
}

RolloverMarket with_shares(const RolloverMarket& m, double eta_i, double eta0) {
    RolloverMarket r = m;
    r.shares = {eta_i, 1.0 - eta_i};
    r.eta0 = eta0;
    return r;
}

// Sign of the early-branch time derivative at T_i = 0 when the rival delays to
// its interior best time; its root in eta_i is the small-regime band edge.
double g_fn(const RolloverMarket& m, std::size_t i) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double a = m.alpha;
    const double ch = m.ec_h;
    const double cr = m.ec_h_r;
    const double kj = kappa_rollover(m, j);
    return 2.0 * a * (m.n_i(i) * ch - m.n * cr + m.n_i(j) * s / (la + s) * cr) -
           2.0 * a * m.n_i(j) * (la / s - la / (la + s)) * cr * fac(kj, la, s, la, l0) -
           a * m.n0() * (l0 / s - l0 / (l0 + s)) * cr * fac(kj, l0, s, la, l0) -
           2.0 * a * m.n0() * l0 / (l0 + s) * cr;
}

double eq_profit_gap(const RolloverMarket& m) {
    // first-upgrade minus late-upgrade profit for provider 0
    return equilibrium_profit_formula(m, 0, EquilibriumFormula::rollover_first) -
           equilibrium_profit_formula(m, 0, EquilibriumFormula::rollover_late);
}

double first_root_or(std::function<double(double)> f, double lo, double hi, double fallback) {
    auto root = first_root(f, lo, hi);
    return root ? *root : fallback;
}

ExtendedTime delayed_time(const RolloverMarket& m, std::size_t i) {
    const double k = kappa_rollover(m, i);
    if (std::isinf(k)) return ExtendedTime::never();
    if (!(k > 1.0)) return ExtendedTime::at(0.0);
    return ExtendedTime::at(std::log(k) / (m.lambda - m.lambda0));
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::mild_reduction_immediate: return "mild-reduction-immediate";
        case Regime::large_eta0_immediate: return "large-eta0-immediate";
        case Regime::medium_asymmetric: return "medium-asymmetric";
        case Regime::medium_both_immediate: return "medium-both-immediate";
        case Regime::small_asymmetric: return "small-asymmetric";
        case Regime::small_no_upgrade: return "small-no-upgrade";
    }
    return "unknown";
}

double late_start_slope(const RolloverMarket& m, std::size_t i) {
    const double s = m.discount;
    return 2.0 * m.alpha * m.n_i(i) * (m.ec_h - m.ec_h_r * (m.lambda + s) / s) -
           m.alpha * m.n0() * m.ec_h_r * m.lambda0 / s;
}

RegimeThresholds regime_thresholds(const RolloverMarket& m) {
    if (m.shares.size() != 2) throw std::invalid_argument("regime_thresholds: duopoly only");
    const double s = m.discount;
    const double reduction = m.ec_h - m.ec_h_r * (m.lambda + s) / s;
    RegimeThresholds th;
    th.large_bound = 2.0 * s / m.lambda0 * (m.ec_h / m.ec_h_r - (m.lambda + s) / s);
    if (reduction <= 0.0) {
        // mild reduction: no delayed regime exists
        th.eta0_bar = 0.0;
        th.eta_r_bar = 1.0;
        th.eta_r_underline = 0.0;
        th.eta_r_tilde = 1.0;
        return th;
    }
    // eta0 is a population ratio, not a share: the boundary may exceed 1. If
    // the delay incentive never flips below the large-eta0 bound, the medium
    // band is empty and the boundary coincides with that bound.
    auto phi = [&](double eta0) { return g_fn(with_shares(m, 0.5, eta0), 0); };
    th.eta0_bar = phi(0.0) <= 0.0
                      ? 0.0
                      : std::clamp(first_root_or(phi, 0.0, th.large_bound, th.large_bound), 0.0,
                                   th.large_bound);
    auto g_of_share = [&](double eta_i) { return g_fn(with_shares(m, eta_i, m.eta0), 0); };
    th.eta_r_bar = clamp01(first_root_or(g_of_share, 0.0, 1.0, g_of_share(1.0) < 0.0 ? 1.0 : 0.0));
    auto gap = [&](double eta_i) { return eq_profit_gap(with_shares(m, eta_i, m.eta0)); };
    th.eta_r_tilde = clamp01(first_root_or(gap, 0.0, 1.0, gap(1.0) > 0.0 ? 1.0 : 0.0));
    const double q = m.eta0 * m.ec_h_r * m.lambda0 / s / (2.0 * reduction);
    th.eta_r_underline =
        std::clamp(std::max(1.0 - th.eta_r_tilde,
                            std::min(std::max(1.0 - th.eta_r_bar, q), std::min(th.eta_r_bar, 1.0 - q))),
                   0.0, 0.5);
    return th;
}

ExtendedTime best_response_rollover(const RolloverMarket& m, std::size_t i,
                                    const ExtendedTime& t_j) {
    if (m.shares.size() != 2) throw std::invalid_argument("best_response_rollover: duopoly only");
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;

    if (t_j.is_never()) {
        // with no competitor the leader profit is monotone in the upgrade time
        const double hi = 2.0 * m.alpha * m.n_i(i);
        const double hj = 2.0 * m.alpha * m.n_i(j);
        const double h0 = 2.0 * m.alpha * m.n0();
        const double slope = hi * (m.ec_h - m.ec_h_r) - m.ec_h_r * hj * la / (la + s) -
                             m.ec_h_r * h0 * l0 / (l0 + s);
        return slope > 0.0 ? ExtendedTime::never() : ExtendedTime::at(0.0);
    }

    const double kappa = kappa_rollover(m, i);
    if (t_j.value() == 0.0) {
        if (std::isinf(kappa)) return ExtendedTime::never();
        if (kappa <= 1.0) return ExtendedTime::at(0.0);
        return ExtendedTime::at(std::log(kappa) / (la - l0));
    }

    const double tj = t_j.value();
    std::vector<ExtendedTime> candidates{ExtendedTime::at(0.0), ExtendedTime::at(tj)};
    // interior stationary points of the early branch
    const double a = m.alpha;
    const double ch = m.ec_h;
    const double cr = m.ec_h_r;
    auto early_slope = [&](double ti) {
        return (2.0 * a * (m.n_i(i) * ch - m.n * cr + m.n_i(j) * s / (la + s) * cr) -
                2.0 * a * m.n0() * l0 / (l0 + s) * cr) *
                   std::exp(-s * ti) -
               2.0 * a * m.n_i(j) * (la / s - la / (la + s)) * cr * std::exp(-s * tj) *
                   std::exp(-la * (tj - ti)) -
               a * m.n0() * (l0 / s - l0 / (l0 + s)) * cr * std::exp(-s * tj) *
                   std::exp(-l0 * (tj - ti));
    };
    for (double r : scan_roots(early_slope, 0.0, tj)) candidates.push_back(ExtendedTime::at(r));
    if (std::isinf(kappa)) {
        candidates.push_back(ExtendedTime::never());
    } else {
        candidates.push_back(ExtendedTime::at(tj + std::max(0.0, std::log(kappa) / (la - l0))));
    }

    ExtendedTime best = candidates.front();
    double best_profit = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const double p = profit_rollover(m, i, c, t_j).total;
        // ties resolve toward the earlier upgrade
        if (p > best_profit || (p == best_profit && c < best)) {
            best_profit = p;
            best = c;
        }
    }
    return best;
}

RolloverEquilibrium classify_and_solve(const RolloverMarket& m) {
    m.validate();
    if (m.shares.size() != 2) throw std::invalid_argument("classify_and_solve: duopoly only");
    const double s = m.discount;
    if (!(m.ec_h < m.ec_h_r * (2.0 * m.lambda + s) / s))
        throw SolverError("classify_and_solve: cost reduction outside the supported range "
                          "(requires ec_h < ec_h_r*(2*lambda+S)/S)");

    RolloverEquilibrium res;
    res.thresholds = regime_thresholds(m);
    auto finish = [&](ExtendedTime t0, ExtendedTime t1, Regime regime) {
        res.times = {t0, t1};
        res.profits = {profit_rollover(m, 0, t0, t1).total, profit_rollover(m, 1, t1, t0).total};
        res.regime = regime;
        return res;
    };

    if (m.ec_h <= m.ec_h_r * (m.lambda + s) / s)
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::mild_reduction_immediate);
    if (m.eta0 >= res.thresholds.large_bound)
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::large_eta0_immediate);

    const double eta_i = m.shares[0];
    if (m.eta0 > res.thresholds.eta0_bar) {
        const double u = res.thresholds.eta_r_underline;
        if (eta_i < u)
            return finish(ExtendedTime::at(0.0), delayed_time(m, 1), Regime::medium_asymmetric);
        if (eta_i > 1.0 - u)
            return finish(delayed_time(m, 0), ExtendedTime::at(0.0), Regime::medium_asymmetric);
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::medium_both_immediate);
    }

    const double b = res.thresholds.eta_r_bar;
    if (eta_i <= b)
        return finish(ExtendedTime::at(0.0), delayed_time(m, 1), Regime::small_asymmetric);
    if (eta_i >= 1.0 - b)
        return finish(delayed_time(m, 0), ExtendedTime::at(0.0), Regime::small_asymmetric);
    return finish(ExtendedTime::never(), ExtendedTime::never(), Regime::small_no_upgrade);
}

double profit_threshold(const RolloverMarket& m, std::size_t i) {
    if (!(m.eta0 < 1.0))
        throw std::invalid_argument("profit_threshold: requires eta0 < 1");
    auto gain = [&](double eta_i) {
        RolloverMarket v = with_shares(m, i == 0 ? eta_i : 1.0 - eta_i, m.eta0);
        const RolloverEquilibrium eq = classify_and_solve(v);
        return eq.profits[i] - profit_rollover_never(v, i);
    };

    const int n_scan = 512;
    const double lo = 1e-6, hi = 1.0 - 1e-6;
    double scale = 0.0;
    std::vector<double> x(n_scan + 1), f(n_scan + 1);
    for (int k = 0; k <= n_scan; ++k) {
        x[k] = lo + (hi - lo) * k / n_scan;
        f[k] = gain(x[k]);
        scale = std::max(scale, std::fabs(f[k]));
    }
    const double tol = 1e-12 * std::max(1.0, scale);
    auto sgn = [&](double v) { return v > tol ? 1 : (v < -tol ? -1 : 0); };

    int changes = 0, last = 0;
    double blo = hi, bhi = hi;
    for (int k = 0; k <= n_scan; ++k) {
        const int sk = sgn(f[k]);
        if (sk == 0) continue;
        if (last != 0 && sk != last) {
            ++changes;
            // bracket runs from the last point of the previous sign
            for (int p = k - 1; p >= 0; --p)
                if (sgn(f[p]) == last) {
                    blo = x[p];
                    break;
                }
            bhi = x[k];
        }
        last = sk;
    }
    if (changes > 1)
        throw SolverError("profit_threshold: multiple sign changes of the upgrade gain detected");
    if (changes == 0) return last >= 0 ? 1.0 : 0.0;
    if (gain(blo) < 0.0) return clamp01(blo);  // gain was positive only through a zero plateau
    return clamp01(bisect([&](double e) { return gain(e); }, blo, bhi, gain(blo), gain(bhi)));
}

double default_grid_step(double discount, double lambda, double lambda0) {
    return 0.05 / std::min(discount, lambda - lambda0);
}

double default_t_max(const RolloverMarket& m) {
    const double base = 10.0 * std::max(1.0 / m.discount, 1.0 / (m.lambda - m.lambda0));
    double extra = 0.0;
    for (std::size_t i = 0; i < m.shares.size(); ++i) {
        const double k = kappa_rollover(m, i);
        if (std::isfinite(k) && k > 1.0)
            extra = std::max(extra, std::log(k) / (m.lambda - m.lambda0));
    }
    return base + extra;
}

}  // namespace wsp
