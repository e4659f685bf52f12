#pragma once

// Pulsating-front measurements from long-time runs: speeds via level-1/2
// crossing times at probes one period apart, profile/phase extraction on the
// (xi, y) lattice, width and steepness diagnostics, and the convergence
// residuals against the frozen-wave family.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsefront/homowave.hpp"
#include "pulsefront/medium.hpp"
#include "pulsefront/numerics.hpp"
#include "pulsefront/pdesolver.hpp"

namespace pulsefront {

struct SpeedEstimate {
    double c_L = 0.0;
    std::vector<double> crossing_times;
    std::vector<double> crossing_positions;
    std::vector<double> per_period_speeds;
    bool converged = false;
    double rel_spread = std::numeric_limits<double>::infinity();
};

struct SpeedMeasureOptions {
    int burn_in_periods = 3;
    int measure_periods = 5;
    double rel_spread_tol = 0.01;
    double stall_speed_band = 0.02;
    double budget_periods = 10.0; // time budget in units of L / expected_speed
    double expected_speed = 0.0;  // |c| scale used for budgets; must be > 0
};

// Front-like data satisfying the (A2) margins: 1 far left, 0 far right,
// logistic transition of unit width scale centered at x_front.
inline Field front_like_init(const Grid1D& g, double x_front) {
    return Field(g, [x_front](double x) {
        return 1.0 / (1.0 + std::exp((x - x_front) / std::sqrt(2.0)));
    });
}

inline Field reverse_front_like_init(const Grid1D& g, double x_front) {
    return Field(g, [x_front](double x) {
        return 1.0 / (1.0 + std::exp(-(x - x_front) / std::sqrt(2.0)));
    });
}

// Interpolated position of the level-1/2 crossing (u decreasing in x); NaN if
// the level is not attained.
inline double level_position(const Field& f, double level = 0.5) {
    for (int i = 1; i < f.grid.n; ++i) {
        if (f.u[i - 1] >= level && f.u[i] < level) {
            const double w = (f.u[i - 1] - level) / (f.u[i - 1] - f.u[i]);
            return f.grid.x(i - 1) + w * f.grid.h;
        }
        if (f.u[i - 1] <= level && f.u[i] > level) {
            const double w = (level - f.u[i - 1]) / (f.u[i] - f.u[i - 1]);
            return f.grid.x(i - 1) + w * f.grid.h;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

inline SpeedEstimate speed_from_probes(const ProbeSeries& probes,
                                       const SpeedMeasureOptions& opts,
                                       double fallback_displacement_speed) {
    struct Crossing { double t, x; };
    std::vector<Crossing> cr;
    for (std::size_t k = 0; k < probes.xs.size(); ++k) {
        const double t = first_crossing_time(probes.ts, probes.vals[k], 0.5);
        if (std::isfinite(t) && t > 0.0) cr.push_back({t, probes.xs[k]});
    }
    std::sort(cr.begin(), cr.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });

    SpeedEstimate est;
    for (const auto& c : cr) {
        est.crossing_times.push_back(c.t);
        est.crossing_positions.push_back(c.x);
    }
    const int burn = opts.burn_in_periods;
    if (static_cast<int>(cr.size()) >= burn + 4) {
        for (std::size_t j = burn + 1; j < cr.size(); ++j)
            est.per_period_speeds.push_back((cr[j].x - cr[j - 1].x) / (cr[j].t - cr[j - 1].t));
        const std::size_t m = est.per_period_speeds.size();
        double lo = est.per_period_speeds[m - 3], hi = lo, sum = 0.0;
        for (std::size_t j = m - 3; j < m; ++j) {
            lo = std::min(lo, est.per_period_speeds[j]);
            hi = std::max(hi, est.per_period_speeds[j]);
            sum += est.per_period_speeds[j];
        }
        est.c_L = sum / 3.0;
        est.rel_spread = (hi - lo) / std::abs(est.c_L);
        est.converged = est.rel_spread <= opts.rel_spread_tol;
    } else {
        // stalled (or nearly so): report the displacement-based speed
        est.c_L = fallback_displacement_speed;
        est.converged = false;
    }
    return est;
}

} // namespace detail

// Measures c_L from a front-like initial condition; negative speeds come out
// of the position/time quotients directly, and a run that produces too few
// probe crossings within the budget is flagged not-converged with a
// displacement-based speed estimate (the stationary regime).
inline SpeedEstimate measure_speed(const PeriodicMedium& med, double L, Field init,
                                   const SolverConfig& cfg, const SpeedMeasureOptions& opts,
                                   Field* final_field = nullptr) {
    if (!(opts.expected_speed > 0.0))
        throw std::invalid_argument("measure_speed: expected_speed must be positive");
    const Grid1D g = init.grid;
    const double xf0 = level_position(init);
    if (!std::isfinite(xf0))
        throw std::invalid_argument("measure_speed: initial data has no 1/2 level");

    std::vector<double> probe_xs;
    const double margin = 5.0;
    for (double x = xf0 - std::floor((xf0 - g.x_min - margin) / L) * L; x < g.x_max() - margin;
         x += L)
        if (std::abs(x - xf0) > 0.45 * L) probe_xs.push_back(x);
    ProbeSeries probes(g, probe_xs);

    const double period_time = L / opts.expected_speed;
    const double t_end =
        std::max(static_cast<double>(opts.burn_in_periods + opts.measure_periods + 2),
                 opts.budget_periods) *
        period_time;

    double pos_mid = xf0, t_mid = 0.0;
    const double t_half = 0.5 * t_end;
    auto obs = probes.observer();
    auto watcher = [&](const Field& f) {
        obs(f);
        if (f.t <= t_half) {
            const double p = level_position(f);
            if (std::isfinite(p)) { pos_mid = p; t_mid = f.t; }
        }
    };
    Field last = evolve(med, L, std::move(init), t_end, cfg, watcher);
    const double pos_end = level_position(last);
    const double disp_speed =
        (std::isfinite(pos_end) && last.t > t_mid) ? (pos_end - pos_mid) / (last.t - t_mid) : 0.0;
    SpeedEstimate est = detail::speed_from_probes(probes, opts, disp_speed);
    if (final_field) *final_field = std::move(last);
    return est;
}

// Same measurement for fronts with reversed limits (0 left, 1 right); the
// returned speed is positive when the state 1 invades leftward.
inline SpeedEstimate measure_reverse_speed(const PeriodicMedium& med, double L, const Grid1D& g,
                                           double x_front, SolverConfig cfg,
                                           const SpeedMeasureOptions& opts) {
    cfg.boundary = BoundaryClamp{0.0, 1.0};
    Field init = reverse_front_like_init(g, x_front);
    if (!(opts.expected_speed > 0.0))
        throw std::invalid_argument("measure_reverse_speed: expected_speed must be positive");

    std::vector<double> probe_xs;
    const double margin = 5.0;
    for (double x = x_front - std::floor((x_front - g.x_min - margin) / L) * L;
         x < g.x_max() - margin; x += L)
        if (std::abs(x - x_front) > 0.45 * L) probe_xs.push_back(x);
    ProbeSeries probes(g, probe_xs);

    const double period_time = L / opts.expected_speed;
    const double t_end =
        std::max(static_cast<double>(opts.burn_in_periods + opts.measure_periods + 2),
                 opts.budget_periods) *
        period_time;
    evolve(med, L, std::move(init), t_end, cfg, probes.observer());
    SpeedEstimate est = detail::speed_from_probes(probes, opts, 0.0);
    est.c_L = -est.c_L;
    for (auto& v : est.per_period_speeds) v = -v;
    return est;
}

struct PulsatingFront {
    double L = 0.0;
    double c_L = 0.0;
    std::vector<double> xi_grid;
    std::vector<double> y_grid;
    std::vector<std::vector<double>> phi; // phi[iy][ixi]
    std::vector<double> zeta;             // zeta[iy], zeta(0) = 0

    double dxi() const { return xi_grid[1] - xi_grid[0]; }

    // bilinear interpolation, periodic in y, clamped in xi
    double phi_at(double xi, double y) const {
        const int ny = static_cast<int>(y_grid.size());
        const double s = (y - std::floor(y)) * ny;
        int j = static_cast<int>(s);
        const double wy = s - j;
        if (j >= ny) j -= ny;
        const auto& row0 = phi[j];
        const auto& row1 = phi[(j + 1) % ny];
        const double v0 = lerp_uniform(row0, xi_grid.front(), dxi(), xi);
        const double v1 = lerp_uniform(row1, xi_grid.front(), dxi(), xi);
        return (1.0 - wy) * v0 + wy * v1;
    }

    double zeta_at(double y) const { return lerp_periodic(zeta, y); }
};

struct ExtractOptions {
    int n_y = 32;
    double xi_lo = -25.0;
    double xi_hi = 25.0;
    double dxi = 0.05;
};

// Builds phi_L(xi, y) from snapshots covering at least one time period: every
// sample (t, x, u) scatters bilinearly onto the (xi = x - c_L t, y = frac(x/L))
// lattice. The profile is then shifted so phi(0, 0) = 1/2 and zeta is read off
// by monotone inversion, threaded continuously in y.
inline PulsatingFront extract_pulsating_front(const PeriodicMedium&, double L,
                                              const SnapshotSet& snaps, double c_L,
                                              const ExtractOptions& opts = {}) {
    if (c_L == 0.0) throw std::invalid_argument("extract_pulsating_front: c_L must be nonzero");
    if (snaps.ts.size() < 2)
        throw std::invalid_argument("extract_pulsating_front: need snapshots");
    const double period = L / std::abs(c_L);
    if (snaps.ts.back() - snaps.ts.front() < period * (1.0 - 1e-9))
        throw std::invalid_argument("extract_pulsating_front: snapshots span less than one period");

    const int nxi = static_cast<int>(std::llround((opts.xi_hi - opts.xi_lo) / opts.dxi)) + 1;
    const int ny = opts.n_y;
    std::vector<std::vector<double>> acc(ny, std::vector<double>(nxi, 0.0));
    std::vector<std::vector<double>> wt(ny, std::vector<double>(nxi, 0.0));

    const Grid1D& g = snaps.grid;
    for (std::size_t k = 0; k < snaps.ts.size(); ++k) {
        const double t = snaps.ts[k];
        if (t - snaps.ts.front() > period) break;
        const auto& u = snaps.us[k];
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            const double xi = x - c_L * t;
            if (xi < opts.xi_lo || xi > opts.xi_hi) continue;
            const double sx = (xi - opts.xi_lo) / opts.dxi;
            const int ix = std::min(nxi - 2, static_cast<int>(sx));
            const double wx = sx - ix;
            const double sy = (x / L - std::floor(x / L)) * ny;
            int iy = static_cast<int>(sy);
            const double wy = sy - iy;
            if (iy >= ny) iy -= ny;
            const int iy1 = (iy + 1) % ny;
            acc[iy][ix] += (1.0 - wy) * (1.0 - wx) * u[i];
            wt[iy][ix] += (1.0 - wy) * (1.0 - wx);
            acc[iy][ix + 1] += (1.0 - wy) * wx * u[i];
            wt[iy][ix + 1] += (1.0 - wy) * wx;
            acc[iy1][ix] += wy * (1.0 - wx) * u[i];
            wt[iy1][ix] += wy * (1.0 - wx);
            acc[iy1][ix + 1] += wy * wx * u[i];
            wt[iy1][ix + 1] += wy * wx;
        }
    }

    PulsatingFront front;
    front.L = L;
    front.c_L = c_L;
    front.xi_grid.resize(nxi);
    for (int i = 0; i < nxi; ++i) front.xi_grid[i] = opts.xi_lo + opts.dxi * i;
    front.y_grid.resize(ny);
    for (int j = 0; j < ny; ++j) front.y_grid[j] = static_cast<double>(j) / ny;
    front.phi.assign(ny, std::vector<double>(nxi, 0.0));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nxi; ++i) {
            if (wt[j][i] <= 0.0)
                throw std::runtime_error("extract_pulsating_front: empty lattice bin (iy=" +
                                         std::to_string(j) + ", ixi=" + std::to_string(i) + ")");
            front.phi[j][i] = acc[j][i] / wt[j][i];
        }

    // invert phi(., y) = 1/2, continuously in y, starting at y = 0
    auto invert_half = [&front, nxi](int j, double seed) {
        const auto& row = front.phi[j];
        double best = std::numeric_limits<double>::quiet_NaN();
        double best_dist = std::numeric_limits<double>::infinity();
        for (int i = 1; i < nxi; ++i) {
            if ((row[i - 1] - 0.5) * (row[i] - 0.5) <= 0.0 && row[i - 1] != row[i]) {
                const double w = (row[i - 1] - 0.5) / (row[i - 1] - row[i]);
                const double z = front.xi_grid[i - 1] + w * front.dxi();
                const double dist = std::isfinite(seed) ? std::abs(z - seed) : 0.0;
                if (dist < best_dist) { best = z; best_dist = dist; }
                if (!std::isfinite(seed)) break;
            }
        }
        if (!std::isfinite(best))
            throw std::runtime_error("extract_pulsating_front: phi(., y) does not cross 1/2");
        return best;
    };

    std::vector<double> zraw(ny);
    zraw[0] = invert_half(0, std::numeric_limits<double>::quiet_NaN());
    for (int j = 1; j < ny; ++j) zraw[j] = invert_half(j, zraw[j - 1]);

    // shift so phi(0,0) = 1/2, i.e. zeta(0) = 0
    const double shift = zraw[0];
    for (auto& v : front.xi_grid) v -= shift;
    front.zeta.resize(ny);
    for (int j = 0; j < ny; ++j) front.zeta[j] = zraw[j] - shift;
    return front;
}

struct WidthStats {
    double delta = 0.1;
    double max_time_diam = 0.0;
    double max_space_diam = 0.0;
    double min_dt_U = std::numeric_limits<double>::infinity();
};

// Width and steepness of the transition band delta <= U <= 1-delta over the
// snapshot window: time diameters from per-point crossing times of the two
// levels, space diameters from per-snapshot level positions, and the minimum
// forward-difference time derivative on the band.
inline WidthStats width_stats(const SnapshotSet& snaps, double delta) {
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("width_stats: delta in (0,1/2]");
    WidthStats ws;
    ws.delta = delta;
    const Grid1D& g = snaps.grid;
    const std::size_t nt = snaps.ts.size();
    if (nt < 3) throw std::invalid_argument("width_stats: need at least 3 snapshots");

    bool band_seen = false;
    std::vector<double> series(nt);
    for (int i = 0; i < g.n; ++i) {
        for (std::size_t k = 0; k < nt; ++k) series[k] = snaps.us[k][i];
        const double t_lo = first_crossing_time(snaps.ts, series, delta);
        const double t_hi = first_crossing_time(snaps.ts, series, 1.0 - delta);
        if (std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo > snaps.ts.front() &&
            t_hi < snaps.ts.back()) {
            ws.max_time_diam = std::max(ws.max_time_diam, std::abs(t_hi - t_lo));
            band_seen = true;
        }
    }

    for (std::size_t k = 0; k < nt; ++k) {
        double x_left = std::numeric_limits<double>::quiet_NaN();
        double x_right = std::numeric_limits<double>::quiet_NaN();
        const auto& u = snaps.us[k];
        for (int i = 1; i < g.n; ++i) {
            if (!std::isfinite(x_left) && (u[i - 1] - (1.0 - delta)) * (u[i] - (1.0 - delta)) <= 0.0 &&
                u[i - 1] != u[i]) {
                const double w = (u[i - 1] - (1.0 - delta)) / (u[i - 1] - u[i]);
                x_left = g.x(i - 1) + w * g.h;
            }
            if ((u[i - 1] - delta) * (u[i] - delta) <= 0.0 && u[i - 1] != u[i]) {
                const double w = (u[i - 1] - delta) / (u[i - 1] - u[i]);
                x_right = g.x(i - 1) + w * g.h;
            }
        }
        if (std::isfinite(x_left) && std::isfinite(x_right)) {
            ws.max_space_diam = std::max(ws.max_space_diam, std::abs(x_right - x_left));
            band_seen = true;
        }
        if (k + 1 < nt) {
            const double dt = snaps.ts[k + 1] - snaps.ts[k];
            for (int i = 0; i < g.n; ++i)
                if (u[i] >= delta && u[i] <= 1.0 - delta)
                    ws.min_dt_U = std::min(ws.min_dt_U, (snaps.us[k + 1][i] - u[i]) / dt);
        }
    }
    if (!band_seen)
        throw std::runtime_error("width_stats: the band was never sampled (delta too extreme)");
    return ws;
}

// Sup over the lattice window of |phi_L(xi + zeta(y), xi/L + y) - psi(xi, y)|.
inline double profile_error(const PulsatingFront& front, const WaveFamily& fam, double Xi) {
    if (Xi + 1.0 > front.xi_grid.back() - front.xi_grid.front())
        throw std::invalid_argument("profile_error: window exceeds the extracted profile support");
    double sup = 0.0;
    const double dxi = 0.05;
    for (const auto& wave : fam.waves) {
        const double y = wave.y;
        const double z = front.zeta_at(y);
        for (double xi = -Xi; xi <= Xi + 1e-12; xi += dxi) {
            if (xi + z < front.xi_grid.front() || xi + z > front.xi_grid.back())
                throw std::invalid_argument("profile_error: window exceeds the extracted profile support");
            const double v = front.phi_at(xi + z, xi / front.L + y);
            sup = std::max(sup, std::abs(v - wave.value(xi)));
        }
    }
    return sup;
}

// Sup over the lattice of the bracket in the phase-shift expansion:
// zeta(y + x/L) - zeta(y) - L * int_y^{y+x/L} (1 - c_L / c(s)) ds, |x| <= A.
inline double zeta_residual(const PulsatingFront& front, const std::function<double(double)>& cfun,
                            double c_L, double A, int nx_samples = 33) {
    double sup = 0.0;
    for (std::size_t j = 0; j < front.y_grid.size(); ++j) {
        const double y = front.y_grid[j];
        for (int k = 0; k < nx_samples; ++k) {
            const double x = -A + 2.0 * A * k / (nx_samples - 1);
            const double inv_int = adaptive_simpson([&cfun](double s) { return 1.0 / cfun(s); }, y,
                                                    y + x / front.L, 1e-12);
            const double predicted = x - front.L * c_L * inv_int;
            const double actual = front.zeta_at(y + x / front.L) - front.zeta[j];
            sup = std::max(sup, std::abs(actual - predicted));
        }
    }
    return sup;
}

} // namespace pulsefront
