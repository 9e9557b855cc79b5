#pragma once

#include "wsp/market.hpp"

namespace wsp {

struct ProfitBreakdown {
    double phase1 = 0.0;
    double phase2 = 0.0;
    double phase3 = 0.0;
    double total = 0.0;
};

enum class PlanType { rollover, shared };

// Which branch of the piecewise profit to evaluate. `auto_select` dispatches on
// t_i <= t_j; the explicit branches exist for boundary-continuity checks.
enum class ProfitBranch { auto_select, early, late };

// Discounted long-run profit with neither provider upgrading.
double profit_rollover_never(const RolloverMarket& m, std::size_t i);
double profit_shared_never(const SharedMarket& m, std::size_t i);

// Exact evaluation of the three-phase discounted profit integrals.
ProfitBreakdown profit_rollover(const RolloverMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j,
                                ProfitBranch branch = ProfitBranch::auto_select);
ProfitBreakdown profit_shared(const SharedMarket& m, std::size_t i, const ExtendedTime& t_i,
                              const ExtendedTime& t_j,
                              ProfitBranch branch = ProfitBranch::auto_select);

// The displayed early/late closed forms for the shared game, kept verbatim as
// an algebraic cross-check of the phase assembly above.
double profit_shared_display_early(const SharedMarket& m, std::size_t i, double t_i, double t_j);
double profit_shared_display_late(const SharedMarket& m, std::size_t i, double t_i, double t_j);

// Substituted equilibrium-profit closed forms.
enum class EquilibriumFormula {
    rollover_simultaneous,  // both at 0
    rollover_first,         // i at 0, j delayed to log(kappa_j)/(lambda-lambda0)
    rollover_late,          // i delayed, j at 0
    shared_simultaneous,
    shared_first,
    shared_late,
};

double equilibrium_profit_formula(const RolloverMarket& m, std::size_t i, EquilibriumFormula which);
double equilibrium_profit_formula(const SharedMarket& m, std::size_t i, EquilibriumFormula which);

// Numerical oracle: integrates per-phase subscriber counts times per-category
// expected monthly cost times e^{-St} over [0, horizon]. Throws if the
// analytic tail bound at the horizon exceeds tail_tol relative to the result.
struct OracleOptions {
    double horizon = 0.0;  // 0 => 60/S
    double tail_tol = 1e-9;
};

double quadrature_profit_oracle(const RolloverMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j, const OracleOptions& opt = {});
double quadrature_profit_oracle(const SharedMarket& m, std::size_t i, const ExtendedTime& t_i,
                                const ExtendedTime& t_j, const OracleOptions& opt = {});

// Instantaneous revenue rate to provider i (used by the oracle and the
// simulator consistency tests).
double rollover_revenue_rate(const RolloverMarket& m, std::size_t i, double t,
                             const ExtendedTime& t_i, const ExtendedTime& t_j);
double shared_revenue_rate(const SharedMarket& m, std::size_t i, double t, const ExtendedTime& t_i,
                           const ExtendedTime& t_j);

}  // namespace wsp
