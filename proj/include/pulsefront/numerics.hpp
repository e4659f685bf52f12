#pragma once

// Small shared numerical kernels: tridiagonal solves, quadrature,
// uniform-grid interpolation and root bracketing helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pulsefront {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// In-place Thomas algorithm. dl/du are the sub/super diagonals (size n-1),
// d the main diagonal (size n); rhs is overwritten with the solution.
inline void solve_tridiagonal(std::span<const double> dl,
                              std::span<const double> d,
                              std::span<const double> du,
                              std::span<double> rhs,
                              std::span<double> scratch) {
    const std::size_t n = d.size();
    if (n == 0) return;
    scratch[0] = du.empty() ? 0.0 : du[0] / d[0];
    rhs[0] /= d[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = d[i] - dl[i - 1] * scratch[i - 1];
        scratch[i] = (i < n - 1) ? du[i] / m : 0.0;
        rhs[i] = (rhs[i] - dl[i - 1] * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= scratch[i] * rhs[i + 1];
}

// Composite trapezoid rule for a 1-periodic integrand over one period.
// Spectrally accurate for smooth periodic functions.
inline double periodic_trapezoid(const std::function<double(double)>& g, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g(static_cast<double>(i) / n);
    return s / n;
}

namespace detail {
inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& g,
                                   double a, double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth, int min_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = g(lm), frm = g(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    // the min_depth floor guards against integrands whose variation aliases
    // away at the first few probe points (periodic integrands on resonant
    // intervals)
    if (depth <= 0 || (min_depth <= 0 && std::abs(left + right - whole) <= 15.0 * tol))
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                                min_depth - 1) +
           adaptive_simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                                min_depth - 1);
}
} // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& g,
                               double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    const double whole = detail::simpson(a, b, fa, fm, fb);
    const int min_depth = std::min(6, std::max(2, static_cast<int>(std::abs(b - a) * 4.0)));
    return detail::adaptive_simpson_rec(g, a, b, fa, fm, fb, whole, tol, 48, min_depth);
}

// Linear interpolation on a uniform grid {x0 + i*h}; clamps outside the range.
inline double lerp_uniform(std::span<const double> v, double x0, double h, double x) {
    if (v.empty()) throw std::invalid_argument("lerp_uniform: empty table");
    const double s = (x - x0) / h;
    if (s <= 0.0) return v.front();
    if (s >= static_cast<double>(v.size() - 1)) return v.back();
    const auto i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

// Periodic linear interpolation of samples at {i/n} over period 1. The weight
// is taken before wrapping the cell index so the s == n edge stays exact.
inline double lerp_periodic(std::span<const double> v, double y) {
    const std::size_t n = v.size();
    const double s = (y - std::floor(y)) * static_cast<double>(n);
    auto i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    if (i >= n) i -= n;
    return v[i] * (1.0 - w) + v[(i + 1) % n] * w;
}

// Bisection for a continuous scalar function with f(lo), f(hi) of opposite sign.
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-14, int max_iter = 200) {
    double flo = g(lo), fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    for (int k = 0; k < max_iter && hi - lo > tol; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else { hi = mid; }
    }
    return 0.5 * (lo + hi);
}

// Least-squares slope/intercept of y against x.
inline std::pair<double, double> linear_fit(std::span<const double> x,
                                            std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

// First time the piecewise-linear series (ts, vs) crosses `level`; NaN if never.
inline double first_crossing_time(std::span<const double> ts, std::span<const double> vs,
                                  double level) {
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double a = vs[i - 1] - level, b = vs[i] - level;
        if (a == 0.0) return ts[i - 1];
        if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
            const double w = a / (a - b);
            return ts[i - 1] + w * (ts[i] - ts[i - 1]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace pulsefront
