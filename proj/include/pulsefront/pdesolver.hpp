#pragma once

// Monotone operator-split solver for the periodic bistable problems: implicit
// diffusion through the conservative three-point flux form (tridiagonal
// M-matrix), explicit reaction with the linear extension outside [0,1].
// Splitting keeps both substeps order-preserving, which the zero-number and
// envelope diagnostics rely on.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsefront/medium.hpp"
#include "pulsefront/numerics.hpp"

namespace pulsefront {

struct Grid1D {
    double x_min = 0.0;
    double h = 0.05;
    int n = 0;

    Grid1D() = default;
    Grid1D(double x_min_, double x_max_, double h_)
        : x_min(x_min_), h(h_), n(static_cast<int>(std::llround((x_max_ - x_min_) / h_)) + 1) {
        if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 points");
    }
    double x(int i) const { return x_min + h * i; }
    double x_max() const { return x_min + h * (n - 1); }
};

struct Field {
    Grid1D grid;
    double t = 0.0;
    std::vector<double> u;

    Field() = default;
    explicit Field(const Grid1D& g, double value = 0.0) : grid(g), u(g.n, value) {}
    Field(const Grid1D& g, const std::function<double(double)>& init) : grid(g), u(g.n) {
        for (int i = 0; i < g.n; ++i) u[i] = init(g.x(i));
    }
};

struct BoundaryClamp {
    double left = 1.0;
    double right = 0.0;
};

struct SolverConfig {
    double dt = 0.0;                 // 0 => pick 0.9 / effective Lipschitz cap
    BoundaryClamp boundary{};
    int snapshot_stride = 16;
    double reaction_lipschitz = 0.0; // cached sup |df/du|; 0 => computed from the medium
};

using SnapshotObserver = std::function<void(const Field&)>;

// Per-grid-point reaction evaluation with the extension built in. Built-in
// media get branch-free cubic/bump arithmetic; anything else falls back to
// the medium's extended_f.
class ReactionSampler {
public:
    ReactionSampler(const PeriodicMedium& med, std::vector<double> positions, double mult)
        : med_(&med), pos_(std::move(positions)), mult_(mult) {
        switch (med.spec.kind) {
            case MediumKind::cubic:
            case MediumKind::custom_table: {
                kind_ = Kind::cubic;
                b_.resize(pos_.size());
                for (std::size_t i = 0; i < pos_.size(); ++i) b_[i] = med.b(pos_[i]);
                break;
            }
            case MediumKind::a4: {
                kind_ = Kind::bump;
                base_b_ = med.spec.base_b;
                d0p_ = med.spec.delta0p;
                s_.resize(pos_.size());
                for (std::size_t i = 0; i < pos_.size(); ++i)
                    s_[i] = med.spec.amp * std::sin(two_pi * pos_[i]);
                break;
            }
        }
    }

    double operator()(std::size_t i, double u) const {
        double v;
        switch (kind_) {
            case Kind::cubic: {
                const double b = b_[i];
                if (u < 0.0) v = -b * u;
                else if (u > 1.0) v = (b - 1.0) * (u - 1.0);
                else v = u * (1.0 - u) * (u - b);
                break;
            }
            case Kind::bump: {
                if (u < 0.0) v = -base_b_ * u;
                else if (u > 1.0) v = (base_b_ - 1.0) * (u - 1.0);
                else v = u * (1.0 - u) * (u - base_b_) + s_[i] * quintic_bump(u, d0p_);
                break;
            }
            default:
                v = med_->extended_f(pos_[i], u);
        }
        return mult_ * v;
    }

private:
    enum class Kind { cubic, bump, custom } kind_ = Kind::custom;
    const PeriodicMedium* med_;
    std::vector<double> pos_;
    double mult_ = 1.0;
    std::vector<double> b_, s_;
    double base_b_ = 0.25, d0p_ = 0.1;
};

namespace detail {

// Backward-Euler factorization of (I - dt * D) with D the conservative flux
// stencil and identity rows at the clamped boundaries.
struct DiffusionFactor {
    std::vector<double> dl, cp, minv;

    DiffusionFactor(std::span<const double> a_half, double h, double dt, int n) {
        dl.assign(n - 1, 0.0);
        std::vector<double> d(n, 1.0), du(n - 1, 0.0);
        const double r = dt / (h * h);
        for (int i = 1; i < n - 1; ++i) {
            const double am = a_half[i - 1], ap = a_half[i];
            dl[i - 1] = -r * am;
            d[i] = 1.0 + r * (am + ap);
            du[i] = -r * ap;
        }
        cp.resize(n);
        minv.resize(n);
        cp[0] = du.empty() ? 0.0 : du[0] / d[0];
        minv[0] = 1.0 / d[0];
        for (int i = 1; i < n; ++i) {
            const double m = d[i] - dl[i - 1] * cp[i - 1];
            minv[i] = 1.0 / m;
            cp[i] = (i < n - 1) ? du[i] / m : 0.0;
        }
    }

    void solve(std::vector<double>& rhs) const {
        const std::size_t n = rhs.size();
        rhs[0] *= minv[0];
        for (std::size_t i = 1; i < n; ++i)
            rhs[i] = (rhs[i] - dl[i - 1] * rhs[i - 1]) * minv[i];
        for (std::size_t i = n - 1; i-- > 0;)
            rhs[i] -= cp[i] * rhs[i + 1];
    }
};

inline Field evolve_core(const std::function<double(double)>& a_of_x,
                         const ReactionSampler& react, double lip_eff, Field field,
                         double t_end, const SolverConfig& cfg, const SnapshotObserver& obs) {
    if (t_end < field.t)
        throw std::invalid_argument("evolve: t_end precedes the field time");
    double dt = cfg.dt > 0.0 ? cfg.dt : 0.9 / lip_eff;
    if (dt * lip_eff > 0.9 * (1.0 + 1e-12))
        throw std::invalid_argument("evolve: dt violates the reaction Lipschitz cap");

    const Grid1D& g = field.grid;
    std::vector<double> a_half(g.n - 1);
    for (int i = 0; i < g.n - 1; ++i) a_half[i] = a_of_x(g.x(i) + 0.5 * g.h);

    DiffusionFactor fac(a_half, g.h, dt, g.n);
    if (obs) obs(field);

    const double total = t_end - field.t;
    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(total / dt - 1e-12)));
    long step = 0;
    bool fresh_snapshot = false;
    while (field.t < t_end - 1e-12 * std::max(1.0, t_end)) {
        double dtk = dt;
        if (field.t + dt > t_end) {
            dtk = t_end - field.t;
            fac = DiffusionFactor(a_half, g.h, dtk, g.n);
        }
        field.u.front() = cfg.boundary.left;
        field.u.back() = cfg.boundary.right;
        fac.solve(field.u);
        for (int i = 1; i < g.n - 1; ++i) field.u[i] += dtk * react(i, field.u[i]);
        field.u.front() = cfg.boundary.left;
        field.u.back() = cfg.boundary.right;
        field.t += dtk;
        ++step;
        bool bad = false;
        for (const double v : field.u)
            if (!std::isfinite(v)) { bad = true; break; }
        if (bad)
            throw std::runtime_error("evolve: non-finite state at step " + std::to_string(step));
        fresh_snapshot = false;
        if (obs && (step % cfg.snapshot_stride == 0 || step == n_steps)) {
            obs(field);
            fresh_snapshot = true;
        }
    }
    if (obs && !fresh_snapshot) obs(field);
    return field;
}

} // namespace detail

// Original-scale problem: u_t = (a(x/L) u_x)_x + f(x/L, u).
inline Field evolve(const PeriodicMedium& med, double L, Field field, double t_end,
                    const SolverConfig& cfg, const SnapshotObserver& obs = {}) {
    const Grid1D& g = field.grid;
    std::vector<double> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[i] = g.x(i) / L;
    const double lip = cfg.reaction_lipschitz > 0.0 ? cfg.reaction_lipschitz
                                                    : med.reaction_lipschitz();
    return detail::evolve_core([&med, L](double x) { return med.a(x / L); },
                               ReactionSampler(med, std::move(pos), 1.0), lip,
                               std::move(field), t_end, cfg, obs);
}

// Rescaled problem: v_t = (1/L)(a(x) v_x)_x + L f(x, v).
inline Field evolve_rescaled(const PeriodicMedium& med, double L, Field field, double t_end,
                             const SolverConfig& cfg, const SnapshotObserver& obs = {}) {
    const Grid1D& g = field.grid;
    std::vector<double> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[i] = g.x(i);
    const double lip = L * (cfg.reaction_lipschitz > 0.0 ? cfg.reaction_lipschitz
                                                         : med.reaction_lipschitz());
    return detail::evolve_core([&med, L](double x) { return med.a(x) / L; },
                               ReactionSampler(med, std::move(pos), L), lip,
                               std::move(field), t_end, cfg, obs);
}

// Offset form z_t = a z_xx + f(y + x/L, z); requires constant diffusivity.
inline Field evolve_offset(const PeriodicMedium& med, double y, double L, Field field,
                           double t_end, const SolverConfig& cfg,
                           const SnapshotObserver& obs = {}) {
    if (!med.a_is_constant)
        throw std::invalid_argument("evolve_offset: medium must have constant diffusivity (A4)");
    const Grid1D& g = field.grid;
    std::vector<double> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[i] = y + g.x(i) / L;
    const double a0 = med.a(0.0);
    const double lip = cfg.reaction_lipschitz > 0.0 ? cfg.reaction_lipschitz
                                                    : med.reaction_lipschitz();
    return detail::evolve_core([a0](double) { return a0; },
                               ReactionSampler(med, std::move(pos), 1.0), lip,
                               std::move(field), t_end, cfg, obs);
}

// Snapshot recording helpers shared by the diagnostics.
struct SnapshotSet {
    Grid1D grid;
    std::vector<double> ts;
    std::vector<std::vector<double>> us;
};

inline SnapshotObserver record_snapshots(SnapshotSet& out) {
    return [&out](const Field& f) {
        out.grid = f.grid;
        if (!out.ts.empty() && f.t <= out.ts.back() + 1e-14) return;
        out.ts.push_back(f.t);
        out.us.push_back(f.u);
    };
}

// Records only the grid slice [x_lo, x_hi]; keeps long runs within memory.
inline SnapshotObserver record_snapshots_window(SnapshotSet& out, double x_lo, double x_hi) {
    return [&out, x_lo, x_hi](const Field& f) {
        const int i0 = std::max(0, static_cast<int>(std::ceil((x_lo - f.grid.x_min) / f.grid.h)));
        const int i1 =
            std::min(f.grid.n - 1, static_cast<int>(std::floor((x_hi - f.grid.x_min) / f.grid.h)));
        if (i1 - i0 < 2) throw std::invalid_argument("record_snapshots_window: window too small");
        out.grid = Grid1D(f.grid.x(i0), f.grid.x(i1), f.grid.h);
        if (!out.ts.empty() && f.t <= out.ts.back() + 1e-14) return;
        out.ts.push_back(f.t);
        out.us.emplace_back(f.u.begin() + i0, f.u.begin() + i1 + 1);
    };
}

// Time series of u at fixed probe positions.
struct ProbeSeries {
    std::vector<double> xs;
    std::vector<int> idx;
    std::vector<double> ts;
    std::vector<std::vector<double>> vals; // one row per probe

    ProbeSeries(const Grid1D& g, std::span<const double> probes) {
        for (const double x : probes) {
            const int i = static_cast<int>(std::llround((x - g.x_min) / g.h));
            if (i < 0 || i >= g.n) throw std::invalid_argument("ProbeSeries: probe outside grid");
            xs.push_back(g.x(i));
            idx.push_back(i);
        }
        vals.resize(xs.size());
    }

    SnapshotObserver observer() {
        return [this](const Field& f) {
            if (!ts.empty() && f.t <= ts.back() + 1e-14) return;
            ts.push_back(f.t);
            for (std::size_t k = 0; k < idx.size(); ++k) vals[k].push_back(f.u[idx[k]]);
        };
    }
};

} // namespace pulsefront
