#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wsp {

// Two-part tariff (P, B, p): lump-sum fee P buys quota B, overage billed at p
// per unit of data beyond the quota.
struct TariffPlan {
    double lump_fee = 0.0;     // P
    double quota = 0.0;        // B
    double overage_price = 0.0;  // p

    void validate() const;
};

enum class UserClass { light, heavy };

// Monthly usage distribution on [min_usage, max_usage]. Either uniform or a
// tabulated piecewise-linear density (knots must span the support and the
// density must integrate to 1 within 1e-9).
struct UsageModel {
    UserClass user_class = UserClass::heavy;
    double min_usage = 0.0;  // d
    double max_usage = 0.0;  // D
    // Empty => uniform. Otherwise (u, f(u)) knots, u ascending.
    std::vector<std::pair<double, double>> density_knots;

    bool uniform() const { return density_knots.empty(); }
    double pdf(double u) const;
    void validate() const;
};

// Convolution density of two members' usage on [lo, hi]. Uniform members get
// the exact trapezoidal form; tabulated members fall back to a numeric
// convolution integral.
class FamilyDensity {
  public:
    FamilyDensity(UsageModel a, UsageModel b);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double pdf(double u) const;
    // Interior knots of the trapezoid (both uniform) or the union of shifted
    // member knots; quadrature splits on these.
    std::vector<double> breakpoints() const;

  private:
    UsageModel a_, b_;
    double lo_ = 0.0, hi_ = 0.0;
    bool analytic_ = false;  // both members uniform
};

struct CostSummary {
    double ec_light = 0.0;          // E C_l
    double ec_heavy = 0.0;          // E C_h
    double ec_heavy_rollover = 0.0; // E C_h^r
    double ec_family_hh = 0.0;      // E C_{h,h}
    double ec_family_hl = 0.0;      // E C_{h,l}
    double agg_d = 0.0;             // D: per-family expected cost before sharing
    double agg_e = 0.0;             // E: per-family expected cost after sharing
};

// P + p * E[(u - B)+]. Light users (D <= B) pay exactly P.
double expected_cost_traditional(const TariffPlan& plan, const UsageModel& usage);

// P + p * E[(u_t - B - (B - u_{t-1})+)+] under i.i.d. consecutive months,
// taking the expectation jointly over both months. Heavy class only.
double expected_cost_rollover(const TariffPlan& plan, const UsageModel& usage);

FamilyDensity family_usage_density(const UsageModel& a, const UsageModel& b);

// 2P + p * E[(u_a + u_b - 2B)+] for a two-member family pooling quotas.
double expected_cost_family(const TariffPlan& plan, const UsageModel& a, const UsageModel& b);

// Per-family expected monthly costs before (agg_d) and after (agg_e) the
// shared plan, for heavy-user share alpha in (0,1).
std::pair<double, double> aggregates(const TariffPlan& plan, const UsageModel& light,
                                     const UsageModel& heavy, double alpha);

CostSummary cost_summary(const TariffPlan& plan, const UsageModel& light,
                         const UsageModel& heavy, double alpha);

// Closed forms for uniform usage with d = 0. Used as the analytic route in
// oracle-equivalence tests; the operations above always take the integral path.
namespace uniform_closed_form {
double ec_heavy(const TariffPlan& plan, double max_heavy);
double ec_heavy_rollover(const TariffPlan& plan, double max_heavy);
double ec_family_hh(const TariffPlan& plan, double max_heavy);
double ec_family_hl(const TariffPlan& plan, double max_heavy, double max_light);
}  // namespace uniform_closed_form

}  // namespace wsp
