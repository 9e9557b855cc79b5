#include "wsp/market.hpp"

#include <numeric>

namespace wsp {

namespace {

void check_shares(const std::vector<double>& shares) {
    if (shares.empty()) throw std::invalid_argument("market: shares must be non-empty");
    double sum = 0.0;
    for (double s : shares) {
        if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("market: shares must lie in [0,1]");
        sum += s;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("market: shares must sum to 1 (got " + std::to_string(sum) + ")");
}

void check_common(double n, double eta0, double alpha, double lambda, double lambda0,
                  double discount) {
    if (!(n >= 0.0)) throw std::invalid_argument("market: N must be >= 0");
    if (!(eta0 >= 0.0)) throw std::invalid_argument("market: eta0 must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("market: alpha must be in (0,1]");
    ChurnRates{lambda, lambda0}.validate();
    if (!(discount > 0.0)) throw std::invalid_argument("market: discount S must be > 0");
}

}  // namespace

void MarketConfig::validate() const {
    check_shares(shares);
    check_common(n, eta0, alpha, rates.lambda, rates.lambda0, discount);
    plan.validate();
    light.validate();
    heavy.validate();
    if (light.user_class != UserClass::light || heavy.user_class != UserClass::heavy)
        throw std::invalid_argument("market: usage models must be tagged light/heavy");
    if (light.max_usage > plan.quota)
        throw std::invalid_argument("market: light users must never exceed the quota (D_l <= B)");
}

void RolloverMarket::validate() const {
    check_shares(shares);
    check_common(n, eta0, alpha, lambda, lambda0, discount);
    if (!(ec_h_r > 0.0) || !(ec_h >= ec_h_r))
        throw std::invalid_argument("market: need ec_h >= ec_h_r > 0");
}

void SharedMarket::validate() const {
    check_shares(shares);
    check_common(n, eta0, alpha, lambda, lambda0, discount);
    if (!(agg_e() > 0.0) || !(agg_d() >= agg_e()))
        throw std::invalid_argument("market: need agg_d >= agg_e > 0");
}

RolloverMarket rollover_market(const MarketConfig& cfg) {
    cfg.validate();
    RolloverMarket m;
    m.n = cfg.n;
    m.eta0 = cfg.eta0;
    m.alpha = cfg.alpha;
    m.lambda = cfg.rates.lambda;
    m.lambda0 = cfg.rates.lambda0;
    m.discount = cfg.discount;
    m.shares = cfg.shares;
    m.ec_h = expected_cost_traditional(cfg.plan, cfg.heavy);
    m.ec_h_r = expected_cost_rollover(cfg.plan, cfg.heavy);
    return m;
}

SharedMarket shared_market(const MarketConfig& cfg) {
    cfg.validate();
    SharedMarket m;
    m.n = cfg.n;
    m.eta0 = cfg.eta0;
    m.alpha = cfg.alpha;
    m.lambda = cfg.rates.lambda;
    m.lambda0 = cfg.rates.lambda0;
    m.discount = cfg.discount;
    m.shares = cfg.shares;
    m.ec_l = expected_cost_traditional(cfg.plan, cfg.light);
    m.ec_h = expected_cost_traditional(cfg.plan, cfg.heavy);
    m.ec_hh = expected_cost_family(cfg.plan, cfg.heavy, cfg.heavy);
    m.ec_hl = expected_cost_family(cfg.plan, cfg.heavy, cfg.light);
    return m;
}

double laggard_share(double eta_j, const ChurnRates& rates, double t, double t_lead) {
    rates.validate();
    if (t < t_lead) throw std::invalid_argument("laggard_share: t must be >= t_lead");
    return eta_j * std::exp(-rates.lambda * (t - t_lead));
}

double new_pool_share(double eta0, const ChurnRates& rates, double t, double t_lead) {
    rates.validate();
    if (t < t_lead) throw std::invalid_argument("new_pool_share: t must be >= t_lead");
    return eta0 * std::exp(-rates.lambda0 * (t - t_lead));
}

double leader_share(double eta_i, double eta_j, double eta0, const ChurnRates& rates, double t,
                    double t_i) {
    rates.validate();
    if (t < t_i) throw std::invalid_argument("leader_share: t must be >= t_i");
    return eta_i + (1.0 - std::exp(-rates.lambda * (t - t_i))) * eta_j +
           (1.0 - std::exp(-rates.lambda0 * (t - t_i))) * eta0;
}

RolloverCounts rollover_phase_counts(const RolloverMarket& m, std::size_t i, double t,
                                     const ExtendedTime& t_i, const ExtendedTime& t_j) {
    if (m.shares.size() != 2) throw std::invalid_argument("rollover_phase_counts: duopoly only");
    const std::size_t j = 1 - i;
    const double heavy_i = 2.0 * m.alpha * m.n_i(i);
    const double heavy_j = 2.0 * m.alpha * m.n_i(j);
    const double heavy_new = 2.0 * m.alpha * m.n0();
    RolloverCounts c;
    const double ti = t_i.value_or_inf();
    const double tj = t_j.value_or_inf();
    c.on_rollover = t >= ti;
    if (t <= std::min(ti, tj)) {
        c.retained = heavy_i;
        return c;
    }
    if (ti <= tj) {  // i leads
        c.retained = heavy_i;
        if (t <= tj) {
            c.switched = heavy_j * (1.0 - std::exp(-m.lambda * (t - ti)));
            c.new_users = heavy_new * (1.0 - std::exp(-m.lambda0 * (t - ti)));
        } else {
            const double gap = tj - ti;
            c.switched = heavy_j * (1.0 - std::exp(-m.lambda * gap));
            // pre-T_j accumulation plus an equal split of the remaining pool
            c.new_users = heavy_new * (1.0 - std::exp(-m.lambda0 * gap)) +
                          0.5 * heavy_new * std::exp(-m.lambda0 * gap) *
                              (1.0 - std::exp(-m.lambda0 * (t - tj)));
        }
    } else {  // i lags
        if (t <= ti) {
            c.retained = heavy_i * std::exp(-m.lambda * (t - tj));
        } else {
            const double gap = ti - tj;
            c.retained = heavy_i * std::exp(-m.lambda * gap);
            c.new_users = 0.5 * heavy_new * std::exp(-m.lambda0 * gap) *
                          (1.0 - std::exp(-m.lambda0 * (t - ti)));
        }
    }
    return c;
}

SharedCounts shared_phase_counts(const SharedMarket& m, std::size_t i, double t,
                                 const ExtendedTime& t_i, const ExtendedTime& t_j) {
    if (m.shares.size() != 2) throw std::invalid_argument("shared_phase_counts: duopoly only");
    const std::size_t j = 1 - i;
    const double ei = m.shares[i];
    const double ej = m.shares[j];
    const double hh = m.alpha * m.alpha * m.n;            // existing (h,h) families
    const double hl = 2.0 * m.alpha * (1.0 - m.alpha) * m.n;  // existing (h,l) families
    const double hh0 = m.alpha * m.alpha * m.n0();
    const double hl0 = 2.0 * m.alpha * (1.0 - m.alpha) * m.n0();
    const double ti = t_i.value_or_inf();
    const double tj = t_j.value_or_inf();
    SharedCounts c;
    if (t <= std::min(ti, tj)) {
        c.indiv_pure_hh = ei * ei * hh;
        c.indiv_mixed_hh = 2.0 * ei * ej * hh;
        c.indiv_pure_hl = ei * ei * hl;
        c.indiv_mixed_hl = 2.0 * ei * ej * hl;
        return c;
    }
    if (ti <= tj) {  // i leads: own pure families pool immediately at t_i
        c.shared_pure_hh_own = ei * ei * hh;
        c.shared_pure_hl_own = ei * ei * hl;
        if (t <= tj) {
            const double grab = 1.0 - std::exp(-m.lambda * (t - ti));
            const double grab0 = 1.0 - std::exp(-m.lambda0 * (t - ti));
            c.shared_pure_hh_rival = ej * ej * hh * grab;
            c.shared_mixed_hh = 2.0 * ei * ej * hh * grab;
            c.shared_new_hh = hh0 * grab0;
            c.shared_pure_hl_rival = ej * ej * hl * grab;
            c.shared_mixed_hl = 2.0 * ei * ej * hl * grab;
            c.shared_new_hl = hl0 * grab0;
            c.indiv_mixed_hh = 2.0 * ei * ej * hh * (1.0 - grab);
            c.indiv_mixed_hl = 2.0 * ei * ej * hl * (1.0 - grab);
        } else {
            const double keep = std::exp(-m.lambda * (tj - ti));
            const double keep0 = std::exp(-m.lambda0 * (tj - ti));
            const double split = 1.0 - std::exp(-m.lambda * (t - tj));
            const double split0 = 1.0 - std::exp(-m.lambda0 * (t - tj));
            c.shared_pure_hh_rival = ej * ej * hh * (1.0 - keep);
            c.shared_mixed_hh = 2.0 * ei * ej * hh * (1.0 - keep) + ei * ej * hh * keep * split;
            c.shared_new_hh = hh0 * (1.0 - keep0) + 0.5 * hh0 * keep0 * split0;
            c.shared_pure_hl_rival = ej * ej * hl * (1.0 - keep);
            c.shared_mixed_hl = 2.0 * ei * ej * hl * (1.0 - keep) + ei * ej * hl * keep * split;
            c.shared_new_hl = hl0 * (1.0 - keep0) + 0.5 * hl0 * keep0 * split0;
            c.indiv_mixed_hh = 2.0 * ei * ej * hh * keep * (1.0 - split);
            c.indiv_mixed_hl = 2.0 * ei * ej * hl * keep * (1.0 - split);
        }
    } else {  // i lags
        if (t <= ti) {
            const double keep = std::exp(-m.lambda * (t - tj));
            c.indiv_pure_hh = ei * ei * hh * keep;
            c.indiv_mixed_hh = 2.0 * ei * ej * hh * keep;
            c.indiv_pure_hl = ei * ei * hl * keep;
            c.indiv_mixed_hl = 2.0 * ei * ej * hl * keep;
        } else {
            const double keep = std::exp(-m.lambda * (ti - tj));
            const double keep0 = std::exp(-m.lambda0 * (ti - tj));
            const double split = 1.0 - std::exp(-m.lambda * (t - ti));
            const double split0 = 1.0 - std::exp(-m.lambda0 * (t - ti));
            c.shared_pure_hh_own = ei * ei * hh * keep;
            c.shared_mixed_hh = ei * ej * hh * keep * split;
            c.shared_new_hh = 0.5 * hh0 * keep0 * split0;
            c.shared_pure_hl_own = ei * ei * hl * keep;
            c.shared_mixed_hl = ei * ej * hl * keep * split;
            c.shared_new_hl = 0.5 * hl0 * keep0 * split0;
            c.indiv_mixed_hh = 2.0 * ei * ej * hh * keep * (1.0 - split);
            c.indiv_mixed_hl = 2.0 * ei * ej * hl * keep * (1.0 - split);
        }
    }
    return c;
}

double kappa_rollover(const RolloverMarket& m, std::size_t i) {
    const double numer = 2.0 * m.shares.at(i) *
                         (m.ec_h - m.ec_h_r * (m.lambda + m.discount) / m.discount);
    const double denom = m.eta0 * m.ec_h_r * m.lambda0 / m.discount;
    if (denom == 0.0) {
        if (numer > 0.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return numer / denom;
}

double kappa_shared_ratio(const SharedMarket& m, std::size_t i) {
    const double ei = m.shares.at(i);
    const double d = m.agg_d();
    const double e = m.agg_e();
    const double numer = (d - e) * ei * ei - e * (m.lambda / m.discount) * ei;
    const double denom = 0.5 * e * m.eta0 * m.lambda0 / m.discount;
    if (denom == 0.0) {
        if (numer > 0.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return numer / denom;
}

}  // namespace wsp
