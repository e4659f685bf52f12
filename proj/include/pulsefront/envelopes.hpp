#pragma once

// Constructive sub/super-solution machinery: the pacing ODE X' = c(y + X/L),
// the explicit gap amplitude q and shift eta with their closed forms, the
// traveling-envelope containment check in the offset frame, the signed
// travel-time distance rho, and the Fife-McLeod envelope for the rescaled
// problem with offsets fitted at t = 0 and checked forward.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pulsefront/fronts.hpp"
#include "pulsefront/homowave.hpp"
#include "pulsefront/medium.hpp"
#include "pulsefront/numerics.hpp"
#include "pulsefront/ode.hpp"
#include "pulsefront/pdesolver.hpp"

namespace pulsefront {

struct PacedTrajectory {
    double y = 0.0;
    double L = 0.0;
    std::vector<double> times, X, dX; // uniform nodes, values and slopes

    // cubic Hermite on the uniform node grid
    double value(double t) const {
        const double h = times[1] - times[0];
        const double s_raw = (t - times.front()) / h;
        if (s_raw <= 0.0) return X.front();
        if (s_raw >= static_cast<double>(X.size() - 1)) return X.back();
        const auto i = static_cast<std::size_t>(s_raw);
        const double s = s_raw - static_cast<double>(i);
        const double y0 = X[i], y1 = X[i + 1];
        const double m0 = dX[i] * h, m1 = dX[i + 1] * h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
               (s3 - s2) * m1;
    }
};

// Pacing ODE X'(t) = c(y + X(t)/L), X(0) = 0, integrated with classical RK4
// on a uniform grid of step <= dt.
inline PacedTrajectory solve_X(const std::function<double(double)>& cfun, double y, double L,
                               double t_end, double dt) {
    PacedTrajectory traj;
    traj.y = y;
    traj.L = L;
    const auto n = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    const double step = t_end / static_cast<double>(n);
    rk4_scalar([&cfun, y, L](double, double x) { return cfun(y + x / L); }, 0.0, 0.0, t_end, step,
               traj.times, traj.X);
    traj.dX.resize(traj.X.size());
    for (std::size_t i = 0; i < traj.X.size(); ++i) traj.dX[i] = cfun(y + traj.X[i] / L);
    for (std::size_t i = 1; i < traj.X.size(); ++i)
        if (traj.X[i] <= traj.X[i - 1])
            throw std::runtime_error("solve_X: trajectory is not increasing (bad speed function)");
    return traj;
}

struct EnvelopeParams {
    double eps = 0.0;
    double gamma1 = 0.0;
    double delta1 = 0.0;
    double M1 = 0.0;
    double beta1 = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double C1 = 0.0;
    double L1eps = 0.0; // admissibility threshold 2 C1 / (gamma1 eps)
};

// Constants entering the q/eta closed forms, estimated from the medium and a
// solved wave family. delta1 favors width (it is capped by delta0' under A4
// so that eps up to delta1/2 stays admissible), gamma1 takes 0.9x the scanned
// margin at that width.
inline EnvelopeParams estimate_constants(const PeriodicMedium& med, const WaveFamily& fam,
                                         double eps, int nx = 128) {
    if (fam.n() < 8) throw std::invalid_argument("estimate_constants: need >= 8 wave nodes");
    EnvelopeParams p;
    p.eps = eps;

    const double delta_cap = med.delta0p ? *med.delta0p : 0.25;
    auto band_margin = [&](double delta) {
        double worst = -std::numeric_limits<double>::max();
        for (int i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            for (int j = 0; j <= 32; ++j) {
                const double du = delta * (2.0 * j / 32.0 - 1.0);
                worst = std::max(worst, med.dfdu(x, std::max(0.0, du)));
                worst = std::max(worst, med.dfdu(x, std::min(1.0, 1.0 + du)));
                if (du < 0.0) worst = std::max(worst, med.dfdu0(x));    // extension below 0
                if (du > 0.0) worst = std::max(worst, med.dfdu1(x));    // extension above 1
            }
        }
        return -worst;
    };
    const int n_cand = 64;
    for (int k = n_cand; k >= 1; --k) {
        const double delta = delta_cap * k / n_cand;
        const double m = band_margin(delta);
        if (m > 0.0) {
            p.delta1 = delta;
            p.gamma1 = 0.9 * m;
            break;
        }
    }
    if (!(p.gamma1 > 0.0))
        throw std::runtime_error("estimate_constants: no width with a negative df/du band");
    if (eps > std::min(p.delta1 / 2.0, med.delta0) + 1e-12)
        throw std::invalid_argument("estimate_constants: eps exceeds min(delta1/2, delta0)");

    // M1: profile within delta1/2 of its limits beyond +-M1, at every node
    double M1 = 0.0;
    for (const auto& w : fam.waves) {
        double lo = w.xi.front(), hi = w.xi.back();
        for (std::size_t i = 0; i < w.xi.size(); ++i) {
            if (w.psi[i] >= 1.0 - p.delta1 / 2.0) lo = w.xi[i];
            if (w.psi[i] > p.delta1 / 2.0) hi = w.xi[i];
        }
        M1 = std::max(M1, std::max(std::abs(lo), std::abs(hi)));
    }
    p.M1 = M1;

    // beta1: steepness floor on the band 2 eps <= psi <= 1 - 2 eps
    double floor_slope = std::numeric_limits<double>::max();
    for (const auto& w : fam.waves)
        for (std::size_t i = 0; i < w.xi.size(); ++i)
            if (w.psi[i] >= 2.0 * eps && w.psi[i] <= 1.0 - 2.0 * eps)
                floor_slope = std::min(floor_slope, -w.dpsi[i]);
    if (!(floor_slope > 0.0))
        throw std::runtime_error("estimate_constants: steepness floor is not positive");
    p.beta1 = 0.9 * floor_slope;

    double K1 = 0.0, K2 = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / nx;
        for (int j = 0; j <= 128; ++j) {
            const double u = static_cast<double>(j) / 128.0;
            K1 = std::max(K1, std::abs(med.dfdx(x, u)));
            K2 = std::max(K2, std::abs(med.dfdu(x, u)));
        }
    }
    p.K1 = K1;
    p.K2 = K2;

    // C1 = max c * sup |d_y psi| via centered differences between nodes
    double dpsi_dy_sup = 0.0;
    const int m = fam.n();
    for (int j = 0; j < m; ++j) {
        const auto& wp = fam.waves[(j + 1) % m];
        const auto& wm = fam.waves[(j + m - 1) % m];
        const double lo = std::max(wp.xi.front(), wm.xi.front());
        const double hi = std::min(wp.xi.back(), wm.xi.back());
        for (int i = 0; i <= 400; ++i) {
            const double x = lo + (hi - lo) * i / 400.0;
            dpsi_dy_sup =
                std::max(dpsi_dy_sup, std::abs(wp.value(x) - wm.value(x)) / (2.0 / m));
        }
    }
    p.C1 = fam.c_max() * dpsi_dy_sup;
    p.L1eps = (p.C1 > 0.0) ? 2.0 * p.C1 / (p.gamma1 * eps) : 0.0;
    return p;
}

// Closed forms of the gap amplitude and the shift. The x-independent case
// K1 -> 0 is evaluated through its analytic limit.
inline std::pair<double, double> q_eta(const EnvelopeParams& p, double L, double t) {
    if (L < p.L1eps)
        throw std::invalid_argument("q_eta: L below the admissibility threshold L1eps");
    if (t < 0.0) throw std::invalid_argument("q_eta: t must be nonnegative");
    const double qinf = p.C1 / (L * p.gamma1);
    const double q = qinf + (p.eps - qinf) * std::exp(-p.gamma1 * t);

    const double pref = (p.gamma1 + p.K2) / p.beta1;
    double bracket;
    if (p.K1 < 1e-12) {
        const double c3 = (p.eps - qinf) / p.gamma1;
        bracket = p.C1 * t / (L * p.gamma1) + c3 * (1.0 - std::exp(-p.gamma1 * t));
    } else {
        const double c2 = p.C1 * p.beta1 / (p.gamma1 * p.K1) + p.M1 * p.beta1 / (p.K2 + p.gamma1);
        const double c3 = (p.eps - qinf) / (p.gamma1 + p.K1 / (L * p.beta1));
        const double grow = p.K1 * t / (L * p.beta1);
        bracket = c2 * std::expm1(grow) + c3 * (std::exp(grow) - std::exp(-p.gamma1 * t));
    }
    return {q, -pref * bracket};
}

// Traveling envelope pair around the paced frozen wave:
//   v+ = psi(x - X(t) + eta(t), y + X(t)/L) + q(t)
//   v- = psi(x - X(t) - eta(t), y + X(t)/L) - q(t)
inline std::pair<double, double> envelope_values(const EnvelopeParams& p, const WaveFamily& fam,
                                                 const PacedTrajectory& traj, double t, double x) {
    const double X = traj.value(t);
    const auto [q, eta] = q_eta(p, traj.L, t);
    const double z = traj.y + X / traj.L;
    const double v_plus = fam.psi(x - X + eta, z) + q;
    const double v_minus = fam.psi(x - X - eta, z) - q;
    return {v_minus, v_plus};
}

struct ContainmentResult {
    double lower_violation = -std::numeric_limits<double>::max();
    double upper_violation = -std::numeric_limits<double>::max();
    double max_violation() const { return std::max(lower_violation, upper_violation); }
};

// Worst containment defects max{v-,0} - v and v - min{v+,1} over snapshots
// and grid points; negative values mean the envelope held.
inline ContainmentResult check_containment(const EnvelopeParams& p, const WaveFamily& fam,
                                           const PacedTrajectory& traj, const SnapshotSet& snaps) {
    ContainmentResult res;
    for (std::size_t k = 0; k < snaps.ts.size(); ++k) {
        const double t = snaps.ts[k];
        const double X = traj.value(t);
        const auto [q, eta] = q_eta(p, traj.L, t);
        const double z = traj.y + X / traj.L;
        for (int i = 0; i < snaps.grid.n; ++i) {
            const double x = snaps.grid.x(i);
            const double v = snaps.us[k][i];
            const double lower = std::max(fam.psi(x - X - eta, z) - q, 0.0);
            const double upper = std::min(fam.psi(x - X + eta, z) + q, 1.0);
            res.lower_violation = std::max(res.lower_violation, lower - v);
            res.upper_violation = std::max(res.upper_violation, v - upper);
        }
    }
    return res;
}

// First time the offset-frame solution reaches 1/2 at x = L; NaN when no
// crossing occurred in the recorded window.
inline double crossing_time_tilde(std::span<const double> ts, std::span<const double> vs) {
    return first_crossing_time(ts, vs, 0.5);
}

// Signed travel-time distance rho(x1, x2) = int_{x2}^{x1} 1/c.
inline double interface_distance(const std::function<double(double)>& cfun, double x1, double x2) {
    return adaptive_simpson([&cfun](double s) { return 1.0 / cfun(s); }, x2, x1, 1e-12);
}

inline double interface_distance(const std::function<double(double)>& cfun, double x,
                                 std::span<const double> gamma0_set) {
    if (gamma0_set.empty())
        throw std::invalid_argument("interface_distance: empty interface set");
    double best = std::numeric_limits<double>::max();
    for (const double x2 : gamma0_set) best = std::min(best, interface_distance(cfun, x, x2));
    return best;
}

struct FifeMcLeodParams {
    double eps0 = 0.0;
    double C_plus = 0.0;
    double C_minus = 0.0;
    double K0 = 0.0;
    double beta = 0.0; // steepness floor of the extracted front on the eps0 band
};

// Largest eps0 <= delta0/2 with df/du <= -gamma0/2 on the two 2*eps0 bands.
inline double estimate_eps0(const PeriodicMedium& med, int nx = 128) {
    if (!(med.gamma0 > 0.0 && med.delta0 > 0.0))
        throw std::invalid_argument("estimate_eps0: medium margins not set");
    auto ok = [&](double e0) {
        for (int i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            for (int j = 0; j <= 16; ++j) {
                const double du = 2.0 * e0 * (2.0 * j / 16.0 - 1.0);
                if (med.dfdu(x, std::clamp(du, 0.0, 1.0)) > -med.gamma0 / 2.0) return false;
                if (med.dfdu(x, std::clamp(1.0 + du, 0.0, 1.0)) > -med.gamma0 / 2.0) return false;
            }
        }
        return true;
    };
    for (int k = 64; k >= 1; --k) {
        const double e0 = 0.5 * med.delta0 * k / 64.0;
        if (ok(e0)) return e0;
    }
    throw std::runtime_error("estimate_eps0: no admissible eps0 found");
}

// Fits the spatial offsets C+- >= 0 so that the Fife-McLeod inequalities hold
// at t = 0 against the initial condition g on the rescaled grid, with
// K0 = (gamma0 + 2 K2)/(beta gamma0).
inline FifeMcLeodParams fit_fife_mcleod(const PeriodicMedium& med, const PulsatingFront& front,
                                        const Field& g, double eps0) {
    FifeMcLeodParams fm;
    fm.eps0 = eps0;

    double K2 = 0.0;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j <= 128; ++j)
            K2 = std::max(K2, std::abs(med.dfdu(i / 128.0, j / 128.0)));

    double steep = std::numeric_limits<double>::max();
    for (std::size_t jy = 0; jy < front.y_grid.size(); ++jy)
        for (std::size_t i = 1; i + 1 < front.xi_grid.size(); ++i) {
            const double v = front.phi[jy][i];
            if (v >= eps0 && v <= 1.0 - eps0)
                steep = std::min(steep, -(front.phi[jy][i + 1] - front.phi[jy][i - 1]) /
                                            (2.0 * front.dxi()));
        }
    if (!(steep > 0.0))
        throw std::runtime_error("fit_fife_mcleod: extracted front has no positive steepness floor");
    fm.beta = 0.9 * steep;
    fm.K0 = (med.gamma0 + 2.0 * K2) / (fm.beta * med.gamma0);

    const double L = front.L;
    auto lower_defect = [&](double C_minus) {
        double worst = -std::numeric_limits<double>::max();
        for (int i = 0; i < g.grid.n; ++i) {
            const double x = g.grid.x(i);
            const double lb = front.phi_at(L * (x + C_minus) + fm.K0 * eps0, x) - eps0;
            worst = std::max(worst, lb - g.u[i]);
        }
        return worst;
    };
    auto upper_defect = [&](double C_plus) {
        double worst = -std::numeric_limits<double>::max();
        for (int i = 0; i < g.grid.n; ++i) {
            const double x = g.grid.x(i);
            const double ub = front.phi_at(L * (x - C_plus) - fm.K0 * eps0, x) + eps0;
            worst = std::max(worst, g.u[i] - ub);
        }
        return worst;
    };
    auto fit = [](const std::function<double(double)>& defect) {
        if (defect(0.0) <= 0.0) return 0.0;
        double hi = 0.5;
        int guard = 0;
        while (defect(hi) > 0.0) {
            hi *= 2.0;
            if (++guard > 24)
                throw std::runtime_error("fit_fife_mcleod: initial ordering impossible");
        }
        return bisect([&defect](double c) { return defect(c); }, 0.0, hi, 1e-10);
    };
    fm.C_minus = fit(lower_defect);
    fm.C_plus = fit(upper_defect);
    // nudge past the fitted boundary so the t = 0 defect is strictly <= 0
    fm.C_minus += 1e-6;
    fm.C_plus += 1e-6;
    return fm;
}

// Max violation of the two Fife-McLeod inequalities over a rescaled run.
inline double check_fife_mcleod(const PeriodicMedium& med, const PulsatingFront& front,
                                const FifeMcLeodParams& fm, const SnapshotSet& snaps,
                                double c_L) {
    const double L = front.L;
    double worst = -std::numeric_limits<double>::max();
    for (std::size_t k = 0; k < snaps.ts.size(); ++k) {
        const double t = snaps.ts[k];
        const double decay = fm.eps0 * std::exp(-med.gamma0 * L * t / 2.0);
        for (int i = 0; i < snaps.grid.n; ++i) {
            const double x = snaps.grid.x(i);
            const double v = snaps.us[k][i];
            const double lb = front.phi_at(L * (x - c_L * t + fm.C_minus) + fm.K0 * fm.eps0, x) - decay;
            const double ub = front.phi_at(L * (x - c_L * t - fm.C_plus) - fm.K0 * fm.eps0, x) + decay;
            worst = std::max(worst, std::max(lb - v, v - ub));
        }
    }
    return worst;
}

// Worst classification defect for the singular-limit dichotomy: for sampled
// (t, x) with t past the interface-formation layer, points with
// rho(x, {0}) < t - margin should satisfy v > hi and points with
// rho(x, {0}) > t + margin should satisfy v < lo. Returns the largest
// threshold miss (negative when the dichotomy holds everywhere).
inline double interface_dichotomy_defect(const SnapshotSet& snaps,
                                         const std::function<double(double)>& cfun, double margin,
                                         double lo = 0.1, double hi = 0.9, double t_skip = 0.5) {
    double worst = -std::numeric_limits<double>::max();
    std::vector<double> rho(snaps.grid.n);
    for (int i = 0; i < snaps.grid.n; ++i)
        rho[i] = interface_distance(cfun, snaps.grid.x(i), 0.0);
    for (std::size_t k = 0; k < snaps.ts.size(); ++k) {
        const double t = snaps.ts[k];
        if (t <= std::max(margin, t_skip)) continue;
        for (int i = 0; i < snaps.grid.n; ++i) {
            const double v = snaps.us[k][i];
            if (rho[i] < t - margin) worst = std::max(worst, hi - v);
            else if (rho[i] > t + margin) worst = std::max(worst, v - lo);
        }
    }
    return worst;
}

} // namespace pulsefront
