#include "wsp/shared_game.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wsp/roots.hpp"

namespace wsp {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double fac(double kappa, double r, double s, double la, double l0) {
    if (std::isinf(kappa)) return 0.0;
    if (!(kappa > 1.0)) return 1.0;
    return std::pow(1.0 / kappa, (r + s) / (la - l0));
}

SharedMarket with_shares(const SharedMarket& m, double eta_i, double eta0) {
    SharedMarket r = m;
    r.shares = {eta_i, 1.0 - eta_i};
    r.eta0 = eta0;
    return r;
}

// Sign of the early-branch time derivative at T_i = 0 against a rival delayed
// to its interior best time (per unit N).
double v_fn(const SharedMarket& m, std::size_t i) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ei = m.shares.at(i);
    const double ej = m.shares.at(j);
    const double d = m.agg_d();
    const double e = m.agg_e();
    const double kj = kappa_shared(m, j);
    return d * ei * (la / (la + s) + ei * s / (la + s)) -
           e * (la / (la + s) + ei * ei * s / (la + s)) - e * m.eta0 * l0 / (l0 + s) -
           ej * e * (la / s - la / (la + s)) * fac(kj, la, s, la, l0) -
           0.5 * e * m.eta0 * l0 * l0 / (s * (l0 + s)) * fac(kj, l0, s, la, l0);
}

double eq_profit_gap(const SharedMarket& m) {
    return equilibrium_profit_formula(m, 0, EquilibriumFormula::shared_first) -
           equilibrium_profit_formula(m, 0, EquilibriumFormula::shared_late);
}

double first_root_or(std::function<double(double)> f, double lo, double hi, double fallback) {
    auto root = first_root(f, lo, hi);
    return root ? *root : fallback;
}

ExtendedTime delayed_time(const SharedMarket& m, std::size_t i) {
    const double k = kappa_shared(m, i);
    if (std::isinf(k)) return ExtendedTime::never();
    if (!(k > 1.0)) return ExtendedTime::at(0.0);
    return ExtendedTime::at(std::log(k) / (m.lambda - m.lambda0));
}

}  // namespace

double kappa_shared(const SharedMarket& m, std::size_t i) { return kappa_shared_ratio(m, i); }

SharedThresholds shared_thresholds(const SharedMarket& m) {
    if (m.shares.size() != 2) throw std::invalid_argument("shared_thresholds: duopoly only");
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double d = m.agg_d();
    const double e = m.agg_e();
    SharedThresholds th;
    th.large_bound_s = 2.0 * (d * s - e * (la + s)) / (e * l0);
    th.small_bound_s = std::max(0.0, (d * s - e * (2.0 * la + s)) / (2.0 * e * l0));
    if (d <= e * (la + s) / s) {
        th.eta0_bar_s = 0.0;
        th.eta_s_hat = 1.0;
        th.eta_s_underline = 0.0;
        th.eta_s_tilde = 1.0;
        return th;
    }
    // eta0 is a population ratio, not a share; an empty medium band pushes the
    // boundary up to the large-eta0 bound
    auto chi = [&](double eta0) { return v_fn(with_shares(m, 0.5, eta0), 0); };
    th.eta0_bar_s = chi(0.0) <= 0.0
                        ? 0.0
                        : std::clamp(first_root_or(chi, 0.0, th.large_bound_s, th.large_bound_s),
                                     0.0, th.large_bound_s);
    auto v_of_share = [&](double eta_i) { return v_fn(with_shares(m, eta_i, m.eta0), 0); };
    th.eta_s_hat = clamp01(first_root_or(v_of_share, 0.0, 1.0, v_of_share(1.0) < 0.0 ? 1.0 : 0.0));
    auto gap = [&](double eta_i) { return eq_profit_gap(with_shares(m, eta_i, m.eta0)); };
    th.eta_s_tilde = clamp01(first_root_or(gap, 0.0, 1.0, gap(1.0) > 0.0 ? 1.0 : 0.0));
    // positive root of the quadratic start-slope condition in eta_i
    const double el = e * la / s;
    const double rho =
        (el + std::sqrt(el * el + 2.0 * (d - e) * e * m.eta0 * l0 / s)) / (2.0 * (d - e));
    th.eta_s_underline =
        std::clamp(std::max(1.0 - th.eta_s_tilde,
                            std::min(std::max(1.0 - th.eta_s_hat, rho),
                                     std::min(th.eta_s_hat, 1.0 - rho))),
                   0.0, 0.5);
    return th;
}

ExtendedTime best_response_shared(const SharedMarket& m, std::size_t i, const ExtendedTime& t_j) {
    if (m.shares.size() != 2) throw std::invalid_argument("best_response_shared: duopoly only");
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ei = m.shares[i];
    const double ej = m.shares[j];
    const double n = m.n;
    const double n0 = m.n0();
    const double d = m.agg_d();
    const double e = m.agg_e();

    if (t_j.is_never()) {
        // leader profit has a single-signed time derivative without a competitor
        const double coeff = ei * n * d - e * ei * ei * n -
                             e * (1.0 - ei * ei) * n * la / (la + s) - e * n0 * l0 / (l0 + s) -
                             d * ei * ej * n * s / (la + s);
        return coeff > 0.0 ? ExtendedTime::never() : ExtendedTime::at(0.0);
    }

    const double kappa = kappa_shared(m, i);
    if (t_j.value() == 0.0) {
        if (std::isinf(kappa)) return ExtendedTime::never();
        if (kappa <= 1.0) return ExtendedTime::at(0.0);
        return ExtendedTime::at(std::log(kappa) / (la - l0));
    }

    const double tj = t_j.value();
    std::vector<ExtendedTime> candidates{ExtendedTime::at(0.0), ExtendedTime::at(tj)};
    // stationary points of the early-branch closed form
    const double coeff_i = e * n * (1.0 / s - 1.0 / (la + s)) + ei * ei * n * e / (la + s) -
                           ei * n * d / s + ei * ej * n * d / (la + s) +
                           n0 * e * (1.0 / s - 1.0 / (l0 + s));
    auto early_slope = [&](double ti) {
        return -s * coeff_i * std::exp(-s * ti) -
               la * (1.0 - ei) * n * e * (1.0 / s - 1.0 / (la + s)) *
                   std::exp(-(la + s) * tj + la * ti) -
               l0 * 0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s)) *
                   std::exp(-(l0 + s) * tj + l0 * ti);
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
        const double p = profit_shared(m, i, c, t_j).total;
        if (p > best_profit || (p == best_profit && c < best)) {
            best_profit = p;
            best = c;
        }
    }
    return best;
}

SharedEquilibrium classify_and_solve_shared(const SharedMarket& m) {
    m.validate();
    if (m.shares.size() != 2)
        throw std::invalid_argument("classify_and_solve_shared: duopoly only");
    const double s = m.discount;
    const double d = m.agg_d();
    const double e = m.agg_e();
    if (!(d < e * (4.0 * m.lambda + s) / s))
        throw SolverError("classify_and_solve_shared: cost reduction outside the supported range "
                          "(requires agg_d < agg_e*(4*lambda+S)/S)");

    SharedEquilibrium res;
    res.thresholds = shared_thresholds(m);
    auto finish = [&](ExtendedTime t0, ExtendedTime t1, Regime regime) {
        res.times = {t0, t1};
        res.profits = {profit_shared(m, 0, t0, t1).total, profit_shared(m, 1, t1, t0).total};
        res.regime = regime;
        return res;
    };

    if (d <= e * (m.lambda + s) / s)
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::mild_reduction_immediate);
    if (m.eta0 >= res.thresholds.large_bound_s)
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::large_eta0_immediate);

    const double eta_i = m.shares[0];
    const double small_edge = std::min(res.thresholds.eta0_bar_s, res.thresholds.small_bound_s);
    if (m.eta0 > small_edge) {
        const double u = res.thresholds.eta_s_underline;
        if (eta_i < u)
            return finish(ExtendedTime::at(0.0), delayed_time(m, 1), Regime::medium_asymmetric);
        if (eta_i > 1.0 - u)
            return finish(delayed_time(m, 0), ExtendedTime::at(0.0), Regime::medium_asymmetric);
        return finish(ExtendedTime::at(0.0), ExtendedTime::at(0.0), Regime::medium_both_immediate);
    }

    const double b = res.thresholds.eta_s_hat;
    if (eta_i <= b)
        return finish(ExtendedTime::at(0.0), delayed_time(m, 1), Regime::small_asymmetric);
    if (eta_i >= 1.0 - b)
        return finish(delayed_time(m, 0), ExtendedTime::at(0.0), Regime::small_asymmetric);
    return finish(ExtendedTime::never(), ExtendedTime::never(), Regime::small_no_upgrade);
}

ZeroNewUserReport zero_new_user_conditions(const SharedMarket& m) {
    const double s = m.discount;
    ZeroNewUserReport r;
    r.ratio_hl = (m.ec_h + m.ec_l) / m.ec_hl;
    r.ratio_hh = 2.0 * m.ec_h / m.ec_hh;
    r.bound = (2.0 * m.lambda + s) / s;
    const double denom = 2.0 * m.ec_l + (m.ec_hh - 2.0 * m.ec_hl) * r.bound;
    r.alpha_threshold = denom != 0.0
                            ? 2.0 * (m.ec_h + m.ec_l - r.bound * m.ec_hl) / denom
                            : std::numeric_limits<double>::infinity();
    if (r.ratio_hl > r.bound && r.ratio_hh <= r.bound) {
        r.branch = ZeroNewUserBranch::hh_drives;
        r.holds = m.alpha >= r.alpha_threshold;
    } else if (r.ratio_hl <= r.bound && r.ratio_hh > r.bound) {
        r.branch = ZeroNewUserBranch::hl_drives;
        r.holds = m.alpha <= r.alpha_threshold;
    } else if (r.ratio_hl <= r.bound && r.ratio_hh <= r.bound) {
        r.branch = ZeroNewUserBranch::both_mild;
        r.holds = true;
    } else {
        r.branch = ZeroNewUserBranch::never_holds;
        r.holds = false;
    }
    r.master_holds = m.agg_d() * s <= m.agg_e() * (2.0 * m.lambda + s);
    return r;
}

double default_t_max(const SharedMarket& m) {
    const double base = 10.0 * std::max(1.0 / m.discount, 1.0 / (m.lambda - m.lambda0));
    double extra = 0.0;
    for (std::size_t i = 0; i < m.shares.size(); ++i) {
        const double k = kappa_shared(m, i);
        if (std::isfinite(k) && k > 1.0)
            extra = std::max(extra, std::log(k) / (m.lambda - m.lambda0));
    }
    return base + extra;
}

}  // namespace wsp
