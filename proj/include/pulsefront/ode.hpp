#pragma once

// Adaptive Cash-Karp 4(5) integration for small first-order systems with
// event termination, plus classical fixed-step RK4. The dense trace keeps
// state and derivative at accepted steps so profiles can be resampled with
// cubic Hermite interpolation.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pulsefront {

template <std::size_t N>
using StateN = std::array<double, N>;

template <std::size_t N>
struct OdeTrace {
    std::vector<double> t;
    std::vector<StateN<N>> y;
    std::vector<StateN<N>> dy;
};

namespace detail {

template <std::size_t N, class Rhs>
void cash_karp_step(const Rhs& rhs, double t, const StateN<N>& y, double h,
                    StateN<N>& y5, StateN<N>& err) {
    constexpr double b21 = 1.0 / 5.0;
    constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                     b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
    constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                     d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0, d6 = c6 - 1.0 / 4.0;

    StateN<N> k1, k2, k3, k4, k5, k6, tmp;
    rhs(t, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * b21 * k1[i];
    rhs(t + 0.2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
    rhs(t + 0.3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    rhs(t + 0.6 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    rhs(t + h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
    rhs(t + 0.875 * h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i) {
        y5[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
        err[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
    }
}

} // namespace detail

// Integrates y' = rhs(t, y) from t0 while event(t, y) stays negative, or until
// t reaches t_max. The event time is refined by bisection on the last step and
// the integration stops exactly there. Returns true when the event fired.
template <std::size_t N, class Rhs, class Event>
bool integrate_to_event(const Rhs& rhs, const Event& event, double t0, double t_max,
                        StateN<N> y, double tol, OdeTrace<N>* trace = nullptr,
                        StateN<N>* y_final = nullptr) {
    double t = t0;
    double h = (t_max - t0) * 1e-4;
    const double h_min = (t_max - t0) * 1e-14;
    StateN<N> dy;
    auto record = [&](double tt, const StateN<N>& yy) {
        if (!trace) return;
        rhs(tt, yy, dy);
        trace->t.push_back(tt);
        trace->y.push_back(yy);
        trace->dy.push_back(dy);
    };
    record(t, y);
    if (y_final) *y_final = y;
    if (event(t, y) >= 0.0) return true;

    StateN<N> y_next, err;
    while (t < t_max) {
        if (t + h > t_max) h = t_max - t;
        detail::cash_karp_step<N>(rhs, t, y, h, y_next, err);
        double scale = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol * (1.0 + std::abs(y[i]));
            scale = std::max(scale, std::abs(err[i]) / sc);
        }
        if (scale > 1.0 && h > h_min) {
            h = std::max(h_min, 0.9 * h * std::pow(scale, -0.25));
            continue;
        }
        const double t_new = t + h;
        const double e_new = event(t_new, y_next);
        if (e_new >= 0.0) {
            // refine the crossing inside [t, t_new] by bisection on sub-steps
            double lo = t, hi = t_new;
            StateN<N> y_lo = y;
            for (int k = 0; k < 60 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++k) {
                const double mid = 0.5 * (lo + hi);
                StateN<N> y_mid, e2;
                detail::cash_karp_step<N>(rhs, lo, y_lo, mid - lo, y_mid, e2);
                if (event(mid, y_mid) >= 0.0) { hi = mid; }
                else { lo = mid; y_lo = y_mid; }
            }
            StateN<N> y_hi, e2;
            detail::cash_karp_step<N>(rhs, lo, y_lo, hi - lo, y_hi, e2);
            record(hi, y_hi);
            if (y_final) *y_final = y_hi;
            return true;
        }
        t = t_new;
        y = y_next;
        record(t, y);
        if (y_final) *y_final = y;
        h = std::min((t_max - t0), 0.9 * h * std::pow(std::max(scale, 1e-10), -0.2));
        if (h <= 0.0) break;
    }
    return false;
}

// Cubic Hermite evaluation of a traced component at query point tq.
template <std::size_t N>
double hermite_eval(const OdeTrace<N>& tr, std::size_t comp, double tq) {
    const auto& ts = tr.t;
    if (ts.empty()) throw std::invalid_argument("hermite_eval: empty trace");
    if (tq <= ts.front()) return tr.y.front()[comp];
    if (tq >= ts.back()) return tr.y.back()[comp];
    std::size_t lo = 0, hi = ts.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (ts[mid] <= tq) lo = mid; else hi = mid;
    }
    const double h = ts[hi] - ts[lo];
    const double s = (tq - ts[lo]) / h;
    const double y0 = tr.y[lo][comp], y1 = tr.y[hi][comp];
    const double m0 = tr.dy[lo][comp] * h, m1 = tr.dy[hi][comp] * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
}

// Classical RK4 for a scalar ODE x' = g(t, x); returns samples at t0 + k*dt.
inline void rk4_scalar(const std::function<double(double, double)>& g,
                       double x0, double t0, double t_end, double dt,
                       std::vector<double>& ts, std::vector<double>& xs) {
    ts.clear(); xs.clear();
    double t = t0, x = x0;
    ts.push_back(t); xs.push_back(x);
    while (t < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
        const double h = std::min(dt, t_end - t);
        const double k1 = g(t, x);
        const double k2 = g(t + 0.5 * h, x + 0.5 * h * k1);
        const double k3 = g(t + 0.5 * h, x + 0.5 * h * k2);
        const double k4 = g(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        ts.push_back(t); xs.push_back(x);
    }
}

} // namespace pulsefront
