#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsp {

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bisection on a bracketing interval [lo, hi] with f(lo)*f(hi) <= 0.
// Refines the unknown to x_tol.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double flo, double fhi, double x_tol = 1e-10) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw BracketError("bisect: not a bracket, f(" + std::to_string(lo) + ")=" +
                           std::to_string(flo) + ", f(" + std::to_string(hi) + ")=" +
                           std::to_string(fhi));
    }
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double x_tol = 1e-10) {
    return bisect(f, lo, hi, f(lo), f(hi), x_tol);
}

// Scan [lo, hi] on a uniform grid, return every sign-change bracket refined by
// bisection. Grid points where f is not finite are skipped (the threshold
// functions have restricted natural domains).
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                                      double hi, int n_scan = 512, double x_tol = 1e-10) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int k = 1; k <= n_scan; ++k) {
        const double x = lo + (hi - lo) * k / n_scan;
        const double fx = f(x);
        if (std::isfinite(f_prev) && std::isfinite(fx) && f_prev * fx <= 0.0 &&
            !(f_prev == 0.0 && fx == 0.0)) {
            roots.push_back(bisect(f, x_prev, x, f_prev, fx, x_tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

// First root on the scan grid, or nullopt.
inline std::optional<double> first_root(const std::function<double(double)>& f, double lo,
                                        double hi, int n_scan = 512, double x_tol = 1e-10) {
    auto roots = scan_roots(f, lo, hi, n_scan, x_tol);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

}  // namespace wsp
