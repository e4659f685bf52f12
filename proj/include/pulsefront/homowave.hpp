#pragma once

// Frozen-coefficient traveling waves: shooting from the unstable manifold of
// the state 1 with bisection on the speed, the harmonic-mean limit speed, and
// tail-decay diagnostics. Phase-plane dissipation fixes the bisection
// direction: too little damping (c small) sends the orbit below u = 0, too
// much damping (c large) turns u' positive before u reaches 0.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pulsefront/medium.hpp"
#include "pulsefront/numerics.hpp"
#include "pulsefront/ode.hpp"

namespace pulsefront {

struct TravelingWave {
    double y = 0.0;
    double c = 0.0;
    std::vector<double> xi;   // uniform abscissae, psi(0) = 1/2
    std::vector<double> psi;
    std::vector<double> dpsi;
    double residual_norm = 0.0;

    double dxi() const { return xi.size() > 1 ? xi[1] - xi[0] : 0.0; }

    // Clamped linear interpolation; the profile saturates at its grid ends.
    double value(double x) const { return lerp_uniform(psi, xi.front(), dxi(), x); }
    double slope(double x) const { return lerp_uniform(dpsi, xi.front(), dxi(), x); }
};

struct DecayBounds {
    double mu1 = 0.0;        // right-tail rate bound
    double mu2 = 0.0;        // left-tail rate bound
    double mu1_tilde = 0.0;  // adjoint-kernel rate
    double empirical_right_slope = 0.0;
    double empirical_left_slope = 0.0;
    double right_intercept = 0.0;
    double left_intercept = 0.0;
};

struct LimitSpeedResult {
    double c_star = 0.0;
    double quad_error_estimate = 0.0;
    int n_samples = 0;
};

namespace detail {

enum class ShotVerdict { speed_too_small, speed_too_large };

struct FrozenProblem {
    double a;
    std::function<double(double)> f;    // extended reaction at frozen y
    double df0, df1;                    // df/du at u = 0 and u = 1
};

inline FrozenProblem freeze(const PeriodicMedium& med, double y, bool flipped) {
    FrozenProblem p;
    p.a = med.a(y);
    if (!flipped) {
        p.f = [&med, y](double u) { return med.extended_f(y, u); };
        p.df0 = med.dfdu0(y);
        p.df1 = med.dfdu1(y);
    } else {
        p.f = [&med, y](double u) { return -med.extended_f(y, 1.0 - u); };
        p.df0 = med.dfdu1(y);
        p.df1 = med.dfdu0(y);
    }
    return p;
}

constexpr double wave_u_floor = 1e-9;

inline ShotVerdict shoot(const FrozenProblem& p, double c, OdeTrace<2>* trace = nullptr) {
    const double lam = (-c + std::sqrt(c * c - 4.0 * p.a * p.df1)) / (2.0 * p.a);
    const double eps = wave_u_floor;
    StateN<2> y0{1.0 - eps, -eps * lam};
    auto rhs = [&p, c](double, const StateN<2>& s, StateN<2>& d) {
        d[0] = s[1];
        d[1] = -(c * s[1] + p.f(s[0])) / p.a;
    };
    auto event = [](double, const StateN<2>& s) {
        return std::max(s[1], wave_u_floor - s[0]);
    };
    StateN<2> last{};
    const bool fired = integrate_to_event<2>(rhs, event, 0.0, 4000.0, y0, 1e-12, trace, &last);
    if (!fired) return ShotVerdict::speed_too_large; // stalled mid-profile
    return last[0] <= 2.0 * wave_u_floor ? ShotVerdict::speed_too_small
                                         : ShotVerdict::speed_too_large;
}

inline double reaction_mass(const FrozenProblem& p, double s0, int n = 512) {
    double s = 0.0;
    const int m = n + (n % 2);
    for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        s += w * p.f(s0 * j / m);
    }
    return s * s0 / (3.0 * m);
}

// A-priori speed bound from the partial reaction mass, doubled for safety and
// verified against the shooting predicate (the raw quotient can undershoot
// the true speed on cubic media).
inline double verified_speed_cap(const FrozenProblem& p) {
    double best_mass = 0.0;
    for (int k = 1; k <= 64; ++k)
        best_mass = std::max(best_mass, reaction_mass(p, static_cast<double>(k) / 64.0));
    if (!(best_mass > 0.0))
        throw std::runtime_error("frozen_speed_bracket: no s0 with positive partial "
                                 "reaction mass (A3 fails at this y)");
    double fmax = 0.0;
    for (int j = 0; j <= 512; ++j) fmax = std::max(fmax, std::abs(p.f(j / 512.0)));
    double hi = 2.0 * fmax / std::sqrt(2.0 * best_mass / p.a);
    for (int k = 0; k < 12 && shoot(p, hi) == ShotVerdict::speed_too_small; ++k) hi *= 2.0;
    return hi;
}

} // namespace detail

// Bracket (0, c_hi] containing the frozen wave speed at parameter y.
inline std::pair<double, double> frozen_speed_bracket(const PeriodicMedium& med, double y) {
    return {0.0, detail::verified_speed_cap(detail::freeze(med, y, false))};
}

// Frozen traveling wave (psi(.,y), c(y)), normalized with psi(0) = 1/2. Media
// with negative mean reaction are handled through the u -> 1-u reflection.
inline TravelingWave solve_frozen_wave(const PeriodicMedium& med, double y,
                                       double tol = 1e-11, double dxi = 0.01,
                                       double residual_tol = 1e-4) {
    const bool flipped = detail::reaction_mass(detail::freeze(med, y, false), 1.0) < 0.0;
    const detail::FrozenProblem prob = detail::freeze(med, y, flipped);

    double lo = 0.0, hi = detail::verified_speed_cap(prob);
    for (int it = 0; it < 200 && hi - lo > std::min(tol, 1e-11); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::shoot(prob, mid) == detail::ShotVerdict::speed_too_small) lo = mid;
        else hi = mid;
    }
    const double c = 0.5 * (lo + hi);

    OdeTrace<2> tr;
    detail::shoot(prob, c, &tr);
    if (tr.t.size() < 8)
        throw std::runtime_error("solve_frozen_wave: shooting trace too short");

    // locate psi = 1/2 on the trace and shift the abscissa there
    std::size_t k = 0;
    while (k + 1 < tr.t.size() && tr.y[k + 1][0] > 0.5) ++k;
    if (k + 1 >= tr.t.size())
        throw std::runtime_error("solve_frozen_wave: profile never crosses 1/2");
    const double xi_half = bisect(
        [&tr](double s) { return hermite_eval(tr, 0, s) - 0.5; }, tr.t[k], tr.t[k + 1], 1e-14);

    TravelingWave wave;
    wave.y = y;
    wave.c = flipped ? -c : c;
    const double lo_xi = tr.t.front() - xi_half, hi_xi = tr.t.back() - xi_half;
    const long k0 = static_cast<long>(std::ceil(lo_xi / dxi));
    const long k1 = static_cast<long>(std::floor(hi_xi / dxi));
    wave.xi.reserve(k1 - k0 + 1);
    wave.psi.reserve(k1 - k0 + 1);
    wave.dpsi.reserve(k1 - k0 + 1);
    for (long j = k0; j <= k1; ++j) {
        const double x = j * dxi;
        wave.xi.push_back(x);
        wave.psi.push_back(hermite_eval(tr, 0, x + xi_half));
        wave.dpsi.push_back(hermite_eval(tr, 1, x + xi_half));
    }
    if (flipped) {
        std::reverse(wave.psi.begin(), wave.psi.end());
        std::reverse(wave.dpsi.begin(), wave.dpsi.end());
        for (auto& v : wave.psi) v = 1.0 - v;
        const double left = -wave.xi.back(), step = dxi;
        for (std::size_t i = 0; i < wave.xi.size(); ++i)
            wave.xi[i] = left + step * static_cast<double>(i);
    }

    for (std::size_t i = 1; i < wave.psi.size(); ++i)
        if (wave.psi[i] >= wave.psi[i - 1])
            throw std::runtime_error("solve_frozen_wave: accepted profile is not decreasing");

    double res = 0.0;
    for (std::size_t i = 1; i + 1 < wave.psi.size(); ++i) {
        const double d2 = (wave.psi[i - 1] - 2.0 * wave.psi[i] + wave.psi[i + 1]) / (dxi * dxi);
        res = std::max(res, std::abs(med.a(y) * d2 + wave.c * wave.dpsi[i] +
                                     med.extended_f(y, wave.psi[i])));
    }
    wave.residual_norm = res;
    if (res > residual_tol)
        throw std::runtime_error("solve_frozen_wave: ODE residual above tolerance");
    return wave;
}

// Harmonic mean of y -> c(y) sampled by the periodic trapezoid rule, with a
// coarse/fine Richardson error estimate.
inline LimitSpeedResult limit_speed_of(const std::function<double(double)>& cfun, int n_y) {
    if (n_y < 2 || n_y % 2 != 0)
        throw std::invalid_argument("limit_speed: n_y must be even and >= 2");
    std::vector<double> inv(n_y);
    for (int i = 0; i < n_y; ++i) inv[i] = 1.0 / cfun(static_cast<double>(i) / n_y);
    double full = 0.0, half = 0.0;
    for (int i = 0; i < n_y; ++i) {
        full += inv[i];
        if (i % 2 == 0) half += inv[i];
    }
    full /= n_y;
    half /= n_y / 2;
    LimitSpeedResult r;
    r.c_star = 1.0 / full;
    r.quad_error_estimate = std::abs(full - half) * r.c_star * r.c_star;
    r.n_samples = n_y;
    return r;
}

inline LimitSpeedResult limit_speed(const PeriodicMedium& med, int n_y, double tol = 1e-11) {
    if (n_y < 2 || n_y % 2 != 0)
        throw std::invalid_argument("limit_speed: n_y must be even and >= 2");
    std::vector<double> inv(n_y);
    for (int i = 0; i < n_y; ++i) {
        const double y = static_cast<double>(i) / n_y;
        try {
            inv[i] = 1.0 / solve_frozen_wave(med, y, tol).c;
        } catch (const std::exception& e) {
            throw std::runtime_error("limit_speed: wave solve failed at y = " +
                                     std::to_string(y) + ": " + e.what());
        }
    }
    double full = 0.0, half = 0.0;
    for (int i = 0; i < n_y; ++i) {
        full += inv[i];
        if (i % 2 == 0) half += inv[i];
    }
    full /= n_y;
    half /= n_y / 2;
    LimitSpeedResult r;
    r.c_star = 1.0 / full;
    r.quad_error_estimate = std::abs(full - half) * r.c_star * r.c_star;
    r.n_samples = n_y;
    return r;
}

// Analytic tail rates from the (A2) margin plus least-squares log-slope fits.
inline DecayBounds decay_rates(double a, double c, double gamma0) {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("decay_rates: gamma0 must be positive");
    DecayBounds d;
    const double disc = std::sqrt(c * c + 4.0 * gamma0 * a);
    d.mu1 = (c + disc) / (2.0 * a);
    d.mu2 = (-c + disc) / (2.0 * a);
    d.mu1_tilde = d.mu2;
    return d;
}

inline DecayBounds decay_bounds(const PeriodicMedium& med, const TravelingWave& wave,
                                int min_tail_points = 20) {
    DecayBounds d = decay_rates(med.a(wave.y), wave.c, med.gamma0);
    const double delta0 = med.delta0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < wave.psi.size(); ++i)
        if (wave.psi[i] < delta0 && wave.psi[i] > 1e-8) {
            xs.push_back(wave.xi[i]);
            ys.push_back(std::log(wave.psi[i]));
        }
    if (static_cast<int>(xs.size()) < min_tail_points)
        throw std::runtime_error("decay_bounds: right tail window too short");
    auto [rs, ri] = linear_fit(xs, ys);
    d.empirical_right_slope = rs;
    d.right_intercept = std::exp(ri);

    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < wave.psi.size(); ++i)
        if (wave.psi[i] > 1.0 - delta0 && wave.psi[i] < 1.0 - 1e-8) {
            xs.push_back(wave.xi[i]);
            ys.push_back(std::log(1.0 - wave.psi[i]));
        }
    if (static_cast<int>(xs.size()) < min_tail_points)
        throw std::runtime_error("decay_bounds: left tail window too short");
    auto [ls, li] = linear_fit(xs, ys);
    d.empirical_left_slope = ls;
    d.left_intercept = std::exp(li);
    return d;
}

// Adjoint kernel w*(xi, y) = exp(c xi / a) d_xi psi(xi, y).
inline double adjoint_kernel(const TravelingWave& wave, double a, double x) {
    return std::exp(wave.c / a * x) * wave.slope(x);
}

// Sup-norm of the centered y-difference of aligned profiles.
inline double dpsi_dy(const PeriodicMedium& med, double y, double dy, double tol = 1e-11) {
    const TravelingWave wp = solve_frozen_wave(med, y + dy, tol);
    const TravelingWave wm = solve_frozen_wave(med, y - dy, tol);
    const double lo = std::max(wp.xi.front(), wm.xi.front());
    const double hi = std::min(wp.xi.back(), wm.xi.back());
    double sup = 0.0;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        sup = std::max(sup, std::abs(wp.value(x) - wm.value(x)) / (2.0 * dy));
    }
    return sup;
}

// Waves solved on the uniform y-lattice {j/n}, interpolated periodically.
struct WaveFamily {
    std::vector<TravelingWave> waves;

    int n() const { return static_cast<int>(waves.size()); }

    double speed(double y) const {
        const int m = n();
        const double s = (y - std::floor(y)) * m;
        int j = static_cast<int>(s);
        const double w = s - j;
        if (j >= m) j -= m;
        return (1.0 - w) * waves[j].c + w * waves[(j + 1) % m].c;
    }

    double psi(double x, double y) const {
        const int m = n();
        const double s = (y - std::floor(y)) * m;
        int j = static_cast<int>(s);
        const double w = s - j;
        if (j >= m) j -= m;
        return (1.0 - w) * waves[j].value(x) + w * waves[(j + 1) % m].value(x);
    }

    double dpsi(double x, double y) const {
        const int m = n();
        const double s = (y - std::floor(y)) * m;
        int j = static_cast<int>(s);
        const double w = s - j;
        if (j >= m) j -= m;
        return (1.0 - w) * waves[j].slope(x) + w * waves[(j + 1) % m].slope(x);
    }

    double c_min() const {
        double v = waves.front().c;
        for (const auto& w : waves) v = std::min(v, w.c);
        return v;
    }
    double c_max() const {
        double v = waves.front().c;
        for (const auto& w : waves) v = std::max(v, w.c);
        return v;
    }

    // Harmonic mean of the piecewise-linear interpolant speed(y), with the
    // segment integrals of 1/c taken in closed form. Exactly consistent with
    // trajectories of X' = speed(y + X/L).
    double c_star_exact() const {
        const int m = n();
        double integral = 0.0;
        for (int j = 0; j < m; ++j) {
            const double c0 = waves[j].c, c1 = waves[(j + 1) % m].c;
            integral += (std::abs(c1 - c0) < 1e-14 * std::abs(c0))
                            ? 1.0 / (m * c0)
                            : std::log(c1 / c0) / (m * (c1 - c0));
        }
        return 1.0 / integral;
    }
};

inline WaveFamily solve_wave_family(const PeriodicMedium& med, int n_y, double tol = 1e-11) {
    WaveFamily fam;
    fam.waves.reserve(n_y);
    for (int j = 0; j < n_y; ++j)
        fam.waves.push_back(solve_frozen_wave(med, static_cast<double>(j) / n_y, tol));
    return fam;
}

} // namespace pulsefront
