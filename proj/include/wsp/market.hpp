#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wsp/cost_model.hpp"

namespace wsp {

// Upgrade time extended with the distinguished "never" strategy. Arithmetic on
// never is handled by explicit case analysis in the profit formulas, not by
// sentinel float propagation.
class ExtendedTime {
  public:
    ExtendedTime() = default;
    static ExtendedTime never() {
        ExtendedTime t;
        t.never_ = true;
        return t;
    }
    static ExtendedTime at(double v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("ExtendedTime: finite value must be >= 0");
        ExtendedTime t;
        t.value_ = v;
        return t;
    }
    bool is_never() const { return never_; }
    double value() const {
        if (never_) throw std::logic_error("ExtendedTime: never has no finite value");
        return value_;
    }
    double value_or_inf() const {
        return never_ ? std::numeric_limits<double>::infinity() : value_;
    }
    friend bool operator==(const ExtendedTime& a, const ExtendedTime& b) {
        return a.never_ == b.never_ && (a.never_ || a.value_ == b.value_);
    }
    friend bool operator<(const ExtendedTime& a, const ExtendedTime& b) {
        return a.value_or_inf() < b.value_or_inf();
    }
    friend bool operator<=(const ExtendedTime& a, const ExtendedTime& b) {
        return a.value_or_inf() <= b.value_or_inf();
    }

  private:
    double value_ = 0.0;
    bool never_ = false;
};

struct ChurnRates {
    double lambda = 0.0;   // existing-user churn rate
    double lambda0 = 0.0;  // new-user arrival rate

    void validate() const {
        // lambda == lambda0 makes log(kappa)/(lambda-lambda0) singular
        if (!(lambda0 > 0.0) || !(lambda > lambda0))
            throw std::invalid_argument("rates: require lambda > lambda0 > 0");
    }
};

// Full scenario: population, shares, churn, discounting, tariff and usage.
struct MarketConfig {
    double n = 0.0;               // N, half the existing user population
    std::vector<double> shares;   // eta_i per provider
    double eta0 = 0.0;            // new-user proportion N0/N
    double alpha = 0.0;           // heavy-user share
    ChurnRates rates;
    double discount = 0.0;        // S
    TariffPlan plan;
    UsageModel light;
    UsageModel heavy;

    void validate() const;
};

// Reduced rollover-game market: everything the timing analysis needs once the
// cost model has been evaluated. Constructible directly for sweeps where the
// expected costs are prescribed rather than derived from a tariff.
struct RolloverMarket {
    double n = 0.0;
    double eta0 = 0.0;
    double alpha = 0.0;
    double lambda = 0.0;
    double lambda0 = 0.0;
    double discount = 0.0;
    std::vector<double> shares;
    double ec_h = 0.0;    // traditional heavy-user expected monthly cost
    double ec_h_r = 0.0;  // rollover heavy-user expected monthly cost

    double n_i(std::size_t i) const { return shares.at(i) * n; }
    double n0() const { return eta0 * n; }
    void validate() const;
};

// Reduced shared-game market; carries the per-category expected costs from
// which the before/after family aggregates follow.
struct SharedMarket {
    double n = 0.0;
    double eta0 = 0.0;
    double alpha = 0.0;
    double lambda = 0.0;
    double lambda0 = 0.0;
    double discount = 0.0;
    std::vector<double> shares;
    double ec_l = 0.0;
    double ec_h = 0.0;
    double ec_hh = 0.0;
    double ec_hl = 0.0;

    double n_i(std::size_t i) const { return shares.at(i) * n; }
    double n0() const { return eta0 * n; }
    double agg_d() const { return 2.0 * alpha * ec_h + 2.0 * alpha * (1.0 - alpha) * ec_l; }
    double agg_e() const {
        return alpha * alpha * ec_hh + 2.0 * alpha * (1.0 - alpha) * ec_hl;
    }
    void validate() const;
};

RolloverMarket rollover_market(const MarketConfig& cfg);
SharedMarket shared_market(const MarketConfig& cfg);

// Share of the laggard's users still with the laggard at t (t >= t_lead).
double laggard_share(double eta_j, const ChurnRates& rates, double t, double t_lead);

// Share of the new-user pool not yet subscribed anywhere at t.
double new_pool_share(double eta0, const ChurnRates& rates, double t, double t_lead);

// Leader's share while the laggard has not upgraded: initial share plus what
// churned over from the laggard and the new pool.
double leader_share(double eta_i, double eta_j, double eta0, const ChurnRates& rates, double t,
                    double t_i);

// Heavy-user headcounts by origin for provider i at time t under upgrade
// times (t_i, t_j), following the three-phase timeline.
struct RolloverCounts {
    double retained = 0.0;   // from i's original base, still with i
    double switched = 0.0;   // churned over from the rival
    double new_users = 0.0;  // from the new-user pool
    bool on_rollover = false;  // i has upgraded at t (affects billing)

    double total() const { return retained + switched + new_users; }
};

RolloverCounts rollover_phase_counts(const RolloverMarket& m, std::size_t i, double t,
                                     const ExtendedTime& t_i, const ExtendedTime& t_j);

// Family headcounts for provider i. "shared_*" families are on i's pooled
// plan; "indiv_*" families still bill their i-side members individually.
struct SharedCounts {
    double shared_pure_hh_own = 0.0;
    double shared_pure_hh_rival = 0.0;
    double shared_mixed_hh = 0.0;
    double shared_new_hh = 0.0;
    double shared_pure_hl_own = 0.0;
    double shared_pure_hl_rival = 0.0;
    double shared_mixed_hl = 0.0;
    double shared_new_hl = 0.0;
    double indiv_pure_hh = 0.0;
    double indiv_mixed_hh = 0.0;
    double indiv_pure_hl = 0.0;
    double indiv_mixed_hl = 0.0;

    double shared_hh() const {
        return shared_pure_hh_own + shared_pure_hh_rival + shared_mixed_hh + shared_new_hh;
    }
    double shared_hl() const {
        return shared_pure_hl_own + shared_pure_hl_rival + shared_mixed_hl + shared_new_hl;
    }
};

SharedCounts shared_phase_counts(const SharedMarket& m, std::size_t i, double t,
                                 const ExtendedTime& t_i, const ExtendedTime& t_j);

// Marginal gain ratio deciding immediate vs delayed upgrade (rollover game).
// kappa <= 0 folds into the immediate branch; eta0 == 0 with a positive
// numerator gives +infinity.
double kappa_rollover(const RolloverMarket& m, std::size_t i);

// Shared-plan analog of the gain ratio.
double kappa_shared_ratio(const SharedMarket& m, std::size_t i);

}  // namespace wsp
