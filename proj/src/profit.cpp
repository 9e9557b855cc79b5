#include "wsp/profit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wsp/quadrature.hpp"

namespace wsp {

namespace {

// integral of e^{-S t} over [a, b], b possibly infinite
double disc(double s, double a, double b) {
    if (b <= a) return 0.0;
    const double upper = std::isinf(b) ? 0.0 : std::exp(-s * b);
    return (std::exp(-s * a) - upper) / s;
}

// integral of e^{-r (t - t0)} e^{-S t} over [a, b], b possibly infinite
double decay(double s, double a, double b, double r, double t0) {
    if (b <= a) return 0.0;
    const double rs = r + s;
    const double upper = std::isinf(b) ? 0.0 : std::exp(-rs * b);
    return std::exp(r * t0) * (std::exp(-rs * a) - upper) / rs;
}

ProfitBranch dispatch(ProfitBranch branch, const ExtendedTime& t_i, const ExtendedTime& t_j) {
    if (branch != ProfitBranch::auto_select) return branch;
    return t_i <= t_j ? ProfitBranch::early : ProfitBranch::late;
}

}  // namespace

double profit_rollover_never(const RolloverMarket& m, std::size_t i) {
    return 2.0 * m.alpha * m.n_i(i) * m.ec_h / m.discount;
}

double profit_shared_never(const SharedMarket& m, std::size_t i) {
    return (2.0 * m.alpha * m.shares.at(i) * m.n * m.ec_h +
            2.0 * m.shares.at(i) * m.n * m.alpha * (1.0 - m.alpha) * m.ec_l) /
           m.discount;
}

ProfitBreakdown profit_rollover(const RolloverMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j, ProfitBranch branch) {
    if (m.shares.size() != 2) throw std::invalid_argument("profit_rollover: duopoly only");
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double hi = 2.0 * m.alpha * m.n_i(i);
    const double hj = 2.0 * m.alpha * m.n_i(j);
    const double h0 = 2.0 * m.alpha * m.n0();
    const double ch = m.ec_h;
    const double cr = m.ec_h_r;
    const double inf = std::numeric_limits<double>::infinity();

    ProfitBreakdown r;
    if (t_i.is_never() && t_j.is_never()) {
        r.phase1 = hi * ch / s;
        r.total = r.phase1;
        return r;
    }
    switch (dispatch(branch, t_i, t_j)) {
        case ProfitBranch::early: {
            // i upgrades at ti <= tj
            const double ti = t_i.value();
            const double tj = t_j.value_or_inf();
            r.phase1 = hi * ch * disc(s, 0.0, ti);
            r.phase2 = cr * ((hi + hj + h0) * disc(s, ti, tj) - hj * decay(s, ti, tj, la, ti) -
                             h0 * decay(s, ti, tj, l0, ti));
            if (!t_j.is_never()) {
                const double keep0 = std::exp(-l0 * (tj - ti));
                const double settled = hj * (1.0 - std::exp(-la * (tj - ti))) + hi +
                                       h0 * (1.0 - keep0) + 0.5 * h0 * keep0;
                r.phase3 = cr * (settled * disc(s, tj, inf) -
                                 0.5 * h0 * keep0 * decay(s, tj, inf, l0, tj));
            }
            break;
        }
        case ProfitBranch::late: {
            // j upgraded at tj <= ti; i's base decays until it upgrades
            const double tj = t_j.value();
            const double ti = t_i.value_or_inf();
            r.phase1 = hi * ch * disc(s, 0.0, tj);
            r.phase2 = hi * ch * decay(s, tj, ti, la, tj);
            if (!t_i.is_never()) {
                const double keep = std::exp(-la * (ti - tj));
                const double keep0 = std::exp(-l0 * (ti - tj));
                r.phase3 = cr * ((hi * keep + 0.5 * h0 * keep0) * disc(s, ti, inf) -
                                 0.5 * h0 * keep0 * decay(s, ti, inf, l0, ti));
            }
            break;
        }
        default:
            break;
    }
    r.total = r.phase1 + r.phase2 + r.phase3;
    return r;
}

ProfitBreakdown profit_shared(const SharedMarket& m, std::size_t i, const ExtendedTime& t_i,
                              const ExtendedTime& t_j, ProfitBranch branch) {
    if (m.shares.size() != 2) throw std::invalid_argument("profit_shared: duopoly only");
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
    const double inf = std::numeric_limits<double>::infinity();

    ProfitBreakdown r;
    if (t_i.is_never() && t_j.is_never()) {
        r.phase1 = ei * n * d / s;
        r.total = r.phase1;
        return r;
    }
    switch (dispatch(branch, t_i, t_j)) {
        case ProfitBranch::early: {
            const double ti = t_i.value();
            const double tj = t_j.value_or_inf();
            r.phase1 = ei * n * d * disc(s, 0.0, ti);
            // pooled families at E-rates, unswitched mixed members still at D-rates
            r.phase2 = e * ei * ei * n * disc(s, ti, tj) +
                       e * (1.0 - ei * ei) * n * (disc(s, ti, tj) - decay(s, ti, tj, la, ti)) +
                       e * n0 * (disc(s, ti, tj) - decay(s, ti, tj, l0, ti)) +
                       d * ei * ej * n * decay(s, ti, tj, la, ti);
            if (!t_j.is_never()) {
                const double keep = std::exp(-la * (tj - ti));
                const double keep0 = std::exp(-l0 * (tj - ti));
                const double settled =
                    e * (ei * ei * n + (1.0 - ei * ei) * n * (1.0 - keep) + n0 * (1.0 - keep0));
                r.phase3 = settled * disc(s, tj, inf) +
                           e * ei * ej * n * keep * (disc(s, tj, inf) - decay(s, tj, inf, la, tj)) +
                           0.5 * e * n0 * keep0 *
                               (disc(s, tj, inf) - decay(s, tj, inf, l0, tj)) +
                           d * ei * ej * n * keep * decay(s, tj, inf, la, tj);
            }
            break;
        }
        case ProfitBranch::late: {
            const double tj = t_j.value();
            const double ti = t_i.value_or_inf();
            r.phase1 = ei * n * d * disc(s, 0.0, tj);
            r.phase2 = ei * n * d * decay(s, tj, ti, la, tj);
            if (!t_i.is_never()) {
                const double keep = std::exp(-la * (ti - tj));
                const double keep0 = std::exp(-l0 * (ti - tj));
                r.phase3 = e * ei * ei * n * keep * disc(s, ti, inf) +
                           e * ei * ej * n * keep * (disc(s, ti, inf) - decay(s, ti, inf, la, ti)) +
                           d * ei * ej * n * keep * decay(s, ti, inf, la, ti) +
                           0.5 * e * n0 * keep0 *
                               (disc(s, ti, inf) - decay(s, ti, inf, l0, ti));
            }
            break;
        }
        default:
            break;
    }
    r.total = r.phase1 + r.phase2 + r.phase3;
    return r;
}

double profit_shared_display_early(const SharedMarket& m, std::size_t i, double t_i, double t_j) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ei = m.shares.at(i);
    const double ej = m.shares.at(j);
    const double n = m.n;
    const double n0 = m.n0();
    const double d = m.agg_d();
    const double e = m.agg_e();
    return (e * n * (1.0 / s - 1.0 / (la + s)) + ei * ei * n * e / (la + s) - ei * n * d / s +
            ei * ej * n * d / (la + s) + n0 * e * (1.0 / s - 1.0 / (l0 + s))) *
               std::exp(-s * t_i) -
           (1.0 - ei) * n * e * (1.0 / s - 1.0 / (la + s)) *
               std::exp(-(la + s) * t_j + la * t_i) -
           0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s)) * std::exp(-(l0 + s) * t_j + l0 * t_i) +
           ei * n * d / s;
}

double profit_shared_display_late(const SharedMarket& m, std::size_t i, double t_i, double t_j) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ei = m.shares.at(i);
    const double ej = m.shares.at(j);
    const double n = m.n;
    const double n0 = m.n0();
    const double d = m.agg_d();
    const double e = m.agg_e();
    return ei * n * d / s - ei * n * d * (1.0 / s - 1.0 / (la + s)) * std::exp(-s * t_j) +
           ei * n * (e / s - ej * e / (la + s) - ei * d / (la + s)) *
               std::exp(-(la + s) * t_i + la * t_j) +
           0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s)) * std::exp(-(l0 + s) * t_i + l0 * t_j);
}

namespace {

// (1/kappa)^{(r+S)/(lambda-lambda0)}; the delay factor e^{-(r+S)T} at the
// best-response time T = max(0, log(kappa)/(lambda-lambda0)), so kappa <= 1
// (immediate upgrade) clamps to 1 and keeps threshold scans continuous
double delay_pow(double kappa, double r, double s, double la, double l0) {
    if (std::isinf(kappa)) return 0.0;
    if (!(kappa > 1.0)) return 1.0;
    return std::pow(1.0 / kappa, (r + s) / (la - l0));
}

}  // namespace

double equilibrium_profit_formula(const RolloverMarket& m, std::size_t i, EquilibriumFormula which) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double a = m.alpha;
    const double ni = m.n_i(i);
    const double nj = m.n_i(j);
    const double n0 = m.n0();
    const double ch = m.ec_h;
    const double cr = m.ec_h_r;
    switch (which) {
        case EquilibriumFormula::rollover_simultaneous:
            return 2.0 * a * ni * cr / s + a * n0 * (1.0 / s - 1.0 / (s + l0)) * cr;
        case EquilibriumFormula::rollover_first: {
            const double kj = kappa_rollover(m, j);
            return 2.0 * a * m.n * cr / s - 2.0 * a * nj * cr / (s + la) -
                   2.0 * a * nj * cr * (1.0 / s - 1.0 / (la + s)) * delay_pow(kj, la, s, la, l0) +
                   2.0 * a * n0 * (1.0 / s - 1.0 / (s + l0)) * cr -
                   a * n0 * (1.0 / s - 1.0 / (s + l0)) * delay_pow(kj, l0, s, la, l0) * cr;
        }
        case EquilibriumFormula::rollover_late: {
            const double ki = kappa_rollover(m, i);
            return 2.0 * a * ni / (la + s) * ch * (1.0 - delay_pow(ki, la, s, la, l0)) +
                   2.0 * a * ni / s * cr * delay_pow(ki, la, s, la, l0) +
                   a * n0 * (1.0 / s - 1.0 / (s + l0)) * delay_pow(ki, l0, s, la, l0) * cr;
        }
        default:
            throw std::invalid_argument("equilibrium_profit_formula: rollover market needs a rollover formula");
    }
}

double equilibrium_profit_formula(const SharedMarket& m, std::size_t i, EquilibriumFormula which) {
    const std::size_t j = 1 - i;
    const double s = m.discount;
    const double la = m.lambda;
    const double l0 = m.lambda0;
    const double ei = m.shares.at(i);
    const double ej = m.shares.at(j);
    const double n = m.n;
    const double n0 = m.n0();
    const double d = m.agg_d();
    const double e = m.agg_e();
    switch (which) {
        case EquilibriumFormula::shared_simultaneous:
            return ei * n * e / s + ei * ej * n * (d - e) / (la + s) +
                   0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s));
        case EquilibriumFormula::shared_first: {
            const double kj = kappa_shared_ratio(m, j);
            return e * n * (1.0 / s - 1.0 / (la + s)) + ei * ei * n * e / (la + s) +
                   ei * ej * n * d / (la + s) + n0 * e * (1.0 / s - 1.0 / (l0 + s)) -
                   (1.0 - ei) * n * e * (1.0 / s - 1.0 / (la + s)) * delay_pow(kj, la, s, la, l0) -
                   0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s)) * delay_pow(kj, l0, s, la, l0);
        }
        case EquilibriumFormula::shared_late: {
            const double ki = kappa_shared_ratio(m, i);
            return ei * n * d / (la + s) * (1.0 - delay_pow(ki, la, s, la, l0)) +
                   ei * n * e / s * delay_pow(ki, la, s, la, l0) +
                   ei * ej * n * (d - e) / (la + s) * delay_pow(ki, la, s, la, l0) +
                   0.5 * n0 * e * (1.0 / s - 1.0 / (l0 + s)) * delay_pow(ki, l0, s, la, l0);
        }
        default:
            throw std::invalid_argument("equilibrium_profit_formula: shared market needs a shared formula");
    }
}

double rollover_revenue_rate(const RolloverMarket& m, std::size_t i, double t,
                             const ExtendedTime& t_i, const ExtendedTime& t_j) {
    const RolloverCounts c = rollover_phase_counts(m, i, t, t_i, t_j);
    const double own_rate = c.on_rollover ? m.ec_h_r : m.ec_h;
    return c.retained * own_rate + (c.switched + c.new_users) * m.ec_h_r;
}

double shared_revenue_rate(const SharedMarket& m, std::size_t i, double t, const ExtendedTime& t_i,
                           const ExtendedTime& t_j) {
    const SharedCounts c = shared_phase_counts(m, i, t, t_i, t_j);
    return c.shared_hh() * m.ec_hh + c.shared_hl() * m.ec_hl +
           c.indiv_pure_hh * 2.0 * m.ec_h + c.indiv_mixed_hh * m.ec_h +
           c.indiv_pure_hl * (m.ec_h + m.ec_l) +
           c.indiv_mixed_hl * 0.5 * (m.ec_h + m.ec_l);
}

namespace {

template <class Rate>
double oracle_impl(double s, double rate_cap, const ExtendedTime& t_i, const ExtendedTime& t_j,
                   const OracleOptions& opt, const Rate& rate) {
    const double horizon = opt.horizon > 0.0 ? opt.horizon : 60.0 / s;
    std::vector<double> pts{0.0};
    if (!t_i.is_never() && t_i.value() < horizon) pts.push_back(t_i.value());
    if (!t_j.is_never() && t_j.value() < horizon) pts.push_back(t_j.value());
    pts.push_back(horizon);
    std::sort(pts.begin(), pts.end());
    auto f = [&](double t) { return rate(t) * std::exp(-s * t); };
    const double value = integrate_pieces(f, pts, {1e-11, 1e-10});
    const double tail = rate_cap * std::exp(-s * horizon) / s;
    if (tail > opt.tail_tol * std::max(1.0, std::fabs(value)))
        throw std::invalid_argument("quadrature_profit_oracle: horizon too short for tail bound");
    return value;
}

}  // namespace

double quadrature_profit_oracle(const RolloverMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j, const OracleOptions& opt) {
    const double rate_cap = 2.0 * m.alpha * (m.n + m.n0()) * std::max(m.ec_h, m.ec_h_r);
    return oracle_impl(m.discount, rate_cap, t_i, t_j, opt,
                       [&](double t) { return rollover_revenue_rate(m, i, t, t_i, t_j); });
}

double quadrature_profit_oracle(const SharedMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j, const OracleOptions& opt) {
    const double rate_cap = (m.n + m.n0()) * std::max(m.agg_d(), m.agg_e());
    return oracle_impl(m.discount, rate_cap, t_i, t_j, opt,
                       [&](double t) { return shared_revenue_rate(m, i, t, t_i, t_j); });
}

}  // namespace wsp
