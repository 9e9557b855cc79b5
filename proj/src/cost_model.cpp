#include "wsp/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "wsp/quadrature.hpp"

namespace wsp {

void TariffPlan::validate() const {
    if (!(lump_fee >= 0.0)) throw std::invalid_argument("plan: P must be >= 0");
    if (!(quota > 0.0)) throw std::invalid_argument("plan: B must be > 0");
    if (!(overage_price >= 0.0)) throw std::invalid_argument("plan: p must be >= 0");
}

double UsageModel::pdf(double u) const {
    if (u < min_usage || u > max_usage) return 0.0;
    if (uniform()) {
        const double w = max_usage - min_usage;
        return w > 0.0 ? 1.0 / w : 0.0;
    }
    // piecewise-linear interpolation between knots
    auto it = std::lower_bound(density_knots.begin(), density_knots.end(), u,
                               [](const auto& kv, double x) { return kv.first < x; });
    if (it == density_knots.begin()) return it->second;
    if (it == density_knots.end()) return density_knots.back().second;
    const auto& [u1, f1] = *(it - 1);
    const auto& [u2, f2] = *it;
    if (u2 == u1) return f2;
    const double w = (u - u1) / (u2 - u1);
    return f1 + w * (f2 - f1);
}

void UsageModel::validate() const {
    if (!(min_usage >= 0.0) || !(max_usage >= min_usage))
        throw std::invalid_argument("usage: need 0 <= d <= D");
    if (uniform()) {
        if (!(max_usage > min_usage))
            throw std::invalid_argument("usage: uniform density needs D > d");
        return;
    }
    if (density_knots.size() < 2) throw std::invalid_argument("usage: need >= 2 density knots");
    double mass = 0.0;
    for (std::size_t k = 0; k < density_knots.size(); ++k) {
        const auto& [u, f] = density_knots[k];
        if (f < 0.0) throw std::invalid_argument("usage: density must be non-negative");
        if (k > 0) {
            const auto& [u0, f0] = density_knots[k - 1];
            if (!(u > u0)) throw std::invalid_argument("usage: density knots must be ascending");
            mass += 0.5 * (f0 + f) * (u - u0);
        }
    }
    if (std::fabs(density_knots.front().first - min_usage) > 1e-12 ||
        std::fabs(density_knots.back().first - max_usage) > 1e-12)
        throw std::invalid_argument("usage: density knots must span [d, D]");
    if (std::fabs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("usage: density must integrate to 1 (got " +
                                    std::to_string(mass) + ")");
}

namespace {

std::vector<double> clip_points(const UsageModel& usage, double lo, double hi) {
    std::vector<double> pts{lo};
    if (!usage.uniform()) {
        for (const auto& [u, f] : usage.density_knots)
            if (u > lo && u < hi) pts.push_back(u);
    }
    pts.push_back(hi);
    return pts;
}

// p * E[(u - threshold)+] by quadrature of the defining integral.
double expected_overage(const TariffPlan& plan, const UsageModel& usage, double threshold) {
    const double lo = std::max(threshold, usage.min_usage);
    const double hi = usage.max_usage;
    if (hi <= lo) return 0.0;
    auto f = [&](double u) { return (u - threshold) * usage.pdf(u); };
    return plan.overage_price * integrate_pieces(f, clip_points(usage, lo, hi));
}

}  // namespace

double expected_cost_traditional(const TariffPlan& plan, const UsageModel& usage) {
    plan.validate();
    usage.validate();
    if (usage.max_usage <= plan.quota) return plan.lump_fee;
    return plan.lump_fee + expected_overage(plan, usage, plan.quota);
}

double expected_cost_rollover(const TariffPlan& plan, const UsageModel& usage) {
    plan.validate();
    usage.validate();
    if (usage.user_class != UserClass::heavy)
        throw std::invalid_argument("rollover cost is only defined for the heavy class");
    // joint expectation E[(u_t - B - (B - u_{t-1})+)+] over both months
    const double b = plan.quota;
    if (usage.max_usage <= b) return plan.lump_fee;
    // E[(u - threshold)+], no price factor
    auto tail = [&](double threshold) {
        const double lo = std::max(threshold, usage.min_usage);
        if (usage.max_usage <= lo) return 0.0;
        auto f = [&](double u) { return (u - threshold) * usage.pdf(u); };
        return integrate_pieces(f, clip_points(usage, lo, usage.max_usage), {1e-12, 1e-11});
    };
    // last month exhausted the quota: overage threshold stays at B
    auto mass = [&](double v) { return usage.pdf(v); };
    double expect =
        integrate_pieces(mass, clip_points(usage, b, usage.max_usage), {1e-12, 1e-11}) * tail(b);
    // last month banked B - v, raising the threshold to 2B - v
    const double v_hi = std::min(b, usage.max_usage);
    if (v_hi > usage.min_usage) {
        auto f = [&](double v) { return usage.pdf(v) * tail(2.0 * b - v); };
        expect += integrate_pieces(f, clip_points(usage, usage.min_usage, v_hi), {1e-11, 1e-10});
    }
    return plan.lump_fee + plan.overage_price * expect;
}

FamilyDensity::FamilyDensity(UsageModel a, UsageModel b) : a_(std::move(a)), b_(std::move(b)) {
    a_.validate();
    b_.validate();
    lo_ = a_.min_usage + b_.min_usage;
    hi_ = a_.max_usage + b_.max_usage;
    analytic_ = a_.uniform() && b_.uniform();
}

double FamilyDensity::pdf(double u) const {
    if (u < lo_ || u > hi_) return 0.0;
    if (analytic_) {
        // trapezoid: overlap length of the two supports at total usage u
        const double w1 = a_.max_usage - a_.min_usage;
        const double w2 = b_.max_usage - b_.min_usage;
        const double overlap = std::min(a_.max_usage, u - b_.min_usage) -
                               std::max(a_.min_usage, u - b_.max_usage);
        return overlap > 0.0 ? overlap / (w1 * w2) : 0.0;
    }
    const double xlo = std::max(a_.min_usage, u - b_.max_usage);
    const double xhi = std::min(a_.max_usage, u - b_.min_usage);
    if (xhi <= xlo) return 0.0;
    auto f = [&](double x) { return a_.pdf(x) * b_.pdf(u - x); };
    return integrate(f, xlo, xhi, {1e-12, 1e-10});
}

std::vector<double> FamilyDensity::breakpoints() const {
    std::vector<double> pts;
    if (analytic_) {
        pts = {lo_, std::min(a_.min_usage + b_.max_usage, b_.min_usage + a_.max_usage),
               std::max(a_.min_usage + b_.max_usage, b_.min_usage + a_.max_usage), hi_};
    } else {
        auto add_shifted = [&](const UsageModel& u, const UsageModel& v) {
            const std::vector<double> ends{v.min_usage, v.max_usage};
            if (u.uniform()) {
                for (double e : ends) {
                    pts.push_back(u.min_usage + e);
                    pts.push_back(u.max_usage + e);
                }
            } else {
                for (const auto& [x, f] : u.density_knots)
                    for (double e : ends) pts.push_back(x + e);
            }
        };
        add_shifted(a_, b_);
        add_shifted(b_, a_);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
              pts.end());
    return pts;
}

FamilyDensity family_usage_density(const UsageModel& a, const UsageModel& b) {
    return FamilyDensity(a, b);
}

double expected_cost_family(const TariffPlan& plan, const UsageModel& a, const UsageModel& b) {
    plan.validate();
    const FamilyDensity fam(a, b);
    const double threshold = 2.0 * plan.quota;
    const double base = 2.0 * plan.lump_fee;
    if (fam.hi() <= threshold) return base;
    std::vector<double> pts{std::max(threshold, fam.lo())};
    for (double bp : fam.breakpoints())
        if (bp > pts.front() && bp < fam.hi()) pts.push_back(bp);
    pts.push_back(fam.hi());
    auto f = [&](double u) { return (u - threshold) * fam.pdf(u); };
    return base + plan.overage_price * integrate_pieces(f, pts);
}

std::pair<double, double> aggregates(const TariffPlan& plan, const UsageModel& light,
                                     const UsageModel& heavy, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    const double ec_l = expected_cost_traditional(plan, light);
    const double ec_h = expected_cost_traditional(plan, heavy);
    const double ec_hh = expected_cost_family(plan, heavy, heavy);
    const double ec_hl = expected_cost_family(plan, heavy, light);
    const double agg_d = 2.0 * alpha * ec_h + 2.0 * alpha * (1.0 - alpha) * ec_l;
    const double agg_e = alpha * alpha * ec_hh + 2.0 * alpha * (1.0 - alpha) * ec_hl;
    return {agg_d, agg_e};
}

CostSummary cost_summary(const TariffPlan& plan, const UsageModel& light,
                         const UsageModel& heavy, double alpha) {
    CostSummary cs;
    cs.ec_light = expected_cost_traditional(plan, light);
    cs.ec_heavy = expected_cost_traditional(plan, heavy);
    cs.ec_heavy_rollover = expected_cost_rollover(plan, heavy);
    cs.ec_family_hh = expected_cost_family(plan, heavy, heavy);
    cs.ec_family_hl = expected_cost_family(plan, heavy, light);
    cs.agg_d = 2.0 * alpha * cs.ec_heavy + 2.0 * alpha * (1.0 - alpha) * cs.ec_light;
    cs.agg_e = alpha * alpha * cs.ec_family_hh + 2.0 * alpha * (1.0 - alpha) * cs.ec_family_hl;
    return cs;
}

namespace uniform_closed_form {

double ec_heavy(const TariffPlan& plan, double d_h) {
    const double b = plan.quota;
    if (d_h <= b) return plan.lump_fee;
    return plan.lump_fee + plan.overage_price * (d_h - b) * (d_h - b) / (2.0 * d_h);
}

double ec_heavy_rollover(const TariffPlan& plan, double d_h) {
    const double b = plan.quota;
    const double p = plan.overage_price;
    if (d_h <= b) return plan.lump_fee;
    const double cube = (d_h - b) * (d_h - b) * (d_h - b);
    if (d_h <= 2.0 * b) return plan.lump_fee + p * 2.0 * cube / (3.0 * d_h * d_h);
    const double excess = (d_h - 2.0 * b) * (d_h - 2.0 * b) * (d_h - 2.0 * b);
    return plan.lump_fee + p * (2.0 * cube / (3.0 * d_h * d_h) - excess / (6.0 * d_h * d_h));
}

double ec_family_hh(const TariffPlan& plan, double d_h) {
    const double b = plan.quota;
    const double p = plan.overage_price;
    const double base = 2.0 * plan.lump_fee;
    if (d_h <= b) return base;
    if (d_h <= 2.0 * b) {
        const double cube = (d_h - b) * (d_h - b) * (d_h - b);
        return base + 4.0 * p * cube / (3.0 * d_h * d_h);
    }
    return base + p / (d_h * d_h) *
                      (d_h * d_h * d_h - 2.0 * b * d_h * d_h + 4.0 / 3.0 * b * b * b);
}

double ec_family_hl(const TariffPlan& plan, double d_h, double d_l) {
    const double b = plan.quota;
    const double p = plan.overage_price;
    const double base = 2.0 * plan.lump_fee;
    if (d_h + d_l <= 2.0 * b) return base;
    if (d_h <= 2.0 * b) {
        const double cube = (d_h + d_l - 2.0 * b) * (d_h + d_l - 2.0 * b) * (d_h + d_l - 2.0 * b);
        return base + p * cube / (6.0 * d_h * d_l);
    }
    return base + p / d_h *
                      (d_h * d_h / 2.0 - 2.0 * b * d_h + 2.0 * b * b + d_l * d_l / 6.0 +
                       d_h * d_l / 2.0 - b * d_l);
}

}  // namespace uniform_closed_form

}  // namespace wsp
