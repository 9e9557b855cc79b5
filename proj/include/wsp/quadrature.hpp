#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wsp {

// Globally adaptive Simpson integration. Default tolerances are tighter than
// every closed-form comparison in the test suite so the numeric route can
// serve as an oracle.
struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 48;
};

namespace detail {

template <class F>
double simpson(const F& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(const F& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth, const QuadratureOptions& opt) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double err = left + right - whole;
    if (depth >= opt.max_depth || std::fabs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, opt) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, opt);
}

}  // namespace detail

template <class F>
double integrate(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: reversed interval");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(whole));
    return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, 0, opt);
}

// Integrate across known breakpoints (density kinks, phase boundaries) so the
// adaptive scheme only ever sees smooth pieces.
template <class F>
double integrate_pieces(const F& f, std::vector<double> pts, const QuadratureOptions& opt = {}) {
    if (pts.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k + 1] > pts[k]) total += integrate(f, pts[k], pts[k + 1], opt);
    }
    return total;
}

}  // namespace wsp
