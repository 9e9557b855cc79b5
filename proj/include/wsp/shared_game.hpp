#pragma once

#include "wsp/rollover_game.hpp"

namespace wsp {

// Thresholds behind the shared-plan regime classification; the same regime
// labels apply with the family cost aggregates in place of per-user costs.
struct SharedThresholds {
    double large_bound_s = 0.0;    // new-user bound above which both upgrade at 0
    double eta0_bar_s = 0.0;       // root of the symmetric-share slope condition
    double small_bound_s = 0.0;    // clamped bound below which the no-upgrade band exists
    double eta_s_underline = 0.0;  // medium regime: asymmetric share band edge
    double eta_s_hat = 0.0;        // small regime: no-upgrade share band edge
    double eta_s_tilde = 0.0;      // share at which first- and late-upgrade profits tie
};

struct SharedEquilibrium {
    std::vector<ExtendedTime> times;
    std::vector<double> profits;
    Regime regime = Regime::mild_reduction_immediate;
    SharedThresholds thresholds;
};

double kappa_shared(const SharedMarket& m, std::size_t i);

SharedThresholds shared_thresholds(const SharedMarket& m);

ExtendedTime best_response_shared(const SharedMarket& m, std::size_t i, const ExtendedTime& t_j);

SharedEquilibrium classify_and_solve_shared(const SharedMarket& m);

// Report on whether both similar-share providers upgrade even with no new
// users, from the per-family cost-reduction ratios.
enum class ZeroNewUserBranch { hh_drives, hl_drives, both_mild, never_holds };

struct ZeroNewUserReport {
    double ratio_hl = 0.0;        // (ec_h + ec_l) / ec_hl
    double ratio_hh = 0.0;        // 2 ec_h / ec_hh
    double bound = 0.0;           // (2 lambda + S) / S
    double alpha_threshold = 0.0;
    ZeroNewUserBranch branch = ZeroNewUserBranch::never_holds;
    bool holds = false;           // the branch condition is met at this alpha
    bool master_holds = false;    // agg_d * S <= agg_e * (2 lambda + S)
};

ZeroNewUserReport zero_new_user_conditions(const SharedMarket& m);

double default_t_max(const SharedMarket& m);

}  // namespace wsp
