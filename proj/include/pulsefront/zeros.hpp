#pragma once

// Sign-change machinery: dead-zone sign words, the subword relation, the
// decaying stationary solution on [0, n] built by monotone parabolic
// iteration with a certified exponential decay rate, classification of
// stationary profiles, and zero-number monotonicity reports along runs.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsefront/medium.hpp"
#include "pulsefront/pdesolver.hpp"

namespace pulsefront {

struct SignWord {
    std::vector<int> signs; // +1 / -1, adjacent entries differ

    int z() const { return static_cast<int>(signs.size()) - 1; }

    std::string str() const {
        std::string s;
        for (const int v : signs) s += (v > 0 ? '+' : '-');
        return s;
    }

    bool operator==(const SignWord&) const = default;
};

inline SignWord word_from(const std::string& s) {
    SignWord w;
    for (const char c : s) {
        if (c != '+' && c != '-') throw std::invalid_argument("word_from: only '+'/'-' allowed");
        const int v = c == '+' ? 1 : -1;
        if (!w.signs.empty() && w.signs.back() == v)
            throw std::invalid_argument("word_from: adjacent entries must differ");
        w.signs.push_back(v);
    }
    return w;
}

// Run-length-compressed signs of the samples, ignoring |v| <= band.
inline SignWord sign_word(std::span<const double> values, double band) {
    if (band < 0.0) throw std::invalid_argument("sign_word: band must be nonnegative");
    SignWord w;
    for (const double v : values) {
        if (std::abs(v) <= band) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (w.signs.empty() || w.signs.back() != s) w.signs.push_back(s);
    }
    return w;
}

// True iff b embeds order-preservingly into a (greedy subsequence test).
inline bool is_subword(const SignWord& b, const SignWord& a) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.signs.size() && j < b.signs.size(); ++i)
        if (a.signs[i] == b.signs[j]) ++j;
    return j == b.signs.size();
}

struct StationarySolution {
    double L = 0.0;
    double delta = 0.0;
    std::vector<double> x;
    std::vector<double> w;
    double mu = 0.0;            // certified decay rate
    double residual_norm = 0.0; // elliptic residual on the grid
};

// Decaying solution of (a_L w')' + f_L(x, w) = 0 on [0, n] with w(0) = delta,
// w(n) = 0, obtained by marching the parabolic flow down from the constant
// super-solution delta. Iterates must decrease pointwise; mu is certified
// from a_L mu^2 - a_L' mu - gamma0 <= 0 on the grid.
inline StationarySolution solve_stationary(const PeriodicMedium& med, double L, double delta,
                                           double half_length, double h = 0.05,
                                           double residual_tol = 1e-8,
                                           double t_chunk = 20.0, int max_chunks = 400) {
    if (!(delta > 0.0) || delta > med.delta0 + 1e-12)
        throw std::invalid_argument("solve_stationary: delta must lie in (0, delta0]");
    Grid1D g(0.0, half_length, h);
    Field fld(g, delta);
    fld.u.back() = 0.0;
    SolverConfig cfg;
    cfg.boundary = BoundaryClamp{delta, 0.0};
    cfg.dt = std::min(0.25, 0.9 / med.reaction_lipschitz());
    cfg.snapshot_stride = 1 << 30;

    auto residual = [&med, L, &g](const std::vector<double>& w) {
        double r = 0.0;
        for (int i = 1; i + 1 < g.n; ++i) {
            const double ap = med.a((g.x(i) + 0.5 * g.h) / L);
            const double am = med.a((g.x(i) - 0.5 * g.h) / L);
            const double diff = (ap * (w[i + 1] - w[i]) - am * (w[i] - w[i - 1])) / (g.h * g.h);
            r = std::max(r, std::abs(diff + med.f(g.x(i) / L, w[i])));
        }
        return r;
    };

    // At the splitting fixed point the post-diffusion state solves the
    // discrete elliptic equation exactly, so the residual (and the returned
    // solution) is taken after one diffusion solve.
    std::vector<double> a_half(g.n - 1);
    for (int i = 0; i < g.n - 1; ++i) a_half[i] = med.a((g.x(i) + 0.5 * g.h) / L);
    const detail::DiffusionFactor fac(a_half, g.h, cfg.dt, g.n);
    auto post_diffusion = [&](const std::vector<double>& u) {
        std::vector<double> v = u;
        v.front() = delta;
        v.back() = 0.0;
        fac.solve(v);
        return v;
    };

    std::vector<double> w = post_diffusion(fld.u);
    double res = residual(w);
    int chunks = 0;
    while (res > residual_tol) {
        if (++chunks > max_chunks)
            throw std::runtime_error("solve_stationary: residual stalled at " + std::to_string(res));
        const std::vector<double> prev = fld.u;
        const double t_next = fld.t + t_chunk;
        fld = evolve(med, L, std::move(fld), t_next, cfg);
        for (int i = 0; i < g.n; ++i)
            if (fld.u[i] > prev[i] + 1e-12)
                throw std::runtime_error("solve_stationary: iterates are not non-increasing");
        w = post_diffusion(fld.u);
        res = residual(w);
    }

    StationarySolution sol;
    sol.L = L;
    sol.delta = delta;
    sol.x.resize(g.n);
    for (int i = 0; i < g.n; ++i) sol.x[i] = g.x(i);
    sol.w = std::move(w);
    sol.residual_norm = res;

    double mu = std::numeric_limits<double>::max();
    const int n_scan = 512;
    for (int i = 0; i < n_scan; ++i) {
        const double y = static_cast<double>(i) / n_scan;
        const double a = med.a(y);
        const double hp = 1e-6;
        const double ap = (med.a(y + hp) - med.a(y - hp)) / (2.0 * hp) / L; // d/dx of a(x/L)
        mu = std::min(mu, (ap + std::sqrt(ap * ap + 4.0 * a * med.gamma0)) / (2.0 * a));
    }
    sol.mu = mu;
    return sol;
}

// Classification of a stationary profile on a window wide enough
// to resolve the tails. Pattern lookup over (SGN[w-1], SGN[w]).
inline char classify_stationary(std::span<const double> w, double band) {
    std::vector<double> wm1(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wm1[i] = w[i] - 1.0;
    const SignWord sw = sign_word(w, band);
    const SignWord sw1 = sign_word(wm1, band);

    if (sw1.z() == 1 && sw.z() == 1) return 'a';
    if (sw1.z() == 0 && sw1.signs[0] < 0) {
        if (sw.z() == 0 && sw.signs[0] > 0) return 'b';
        if (sw.z() == 1 && sw.signs[0] < 0) return 'c';
        if (sw.z() == 1 && sw.signs[0] > 0) return 'd';
        if (sw.z() == 2 && sw.signs[0] < 0) return 'e';
    }
    throw std::runtime_error("classify_stationary: pattern (" + sw1.str() + ", " + sw.str() +
                             ") matches no admissible type");
}

struct ZeroReportRow {
    double t = 0.0;
    int z = 0;
    std::string word;
};

struct ZeroReport {
    std::vector<ZeroReportRow> rows;
    bool z_monotone = true;
    bool subword_chain = true;
};

// Sign words of u(t,.) - w across checkpoints; flags record whether z was
// non-increasing and each word embedded in its predecessor.
inline ZeroReport zero_monotonicity_report(const SnapshotSet& snaps,
                                           std::span<const double> comparator, double band) {
    if (snaps.us.empty() || comparator.size() != static_cast<std::size_t>(snaps.grid.n))
        throw std::invalid_argument("zero_monotonicity_report: comparator grid mismatch");
    ZeroReport rep;
    SignWord prev;
    std::vector<double> diff(comparator.size());
    for (std::size_t k = 0; k < snaps.ts.size(); ++k) {
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = snaps.us[k][i] - comparator[i];
        const SignWord w = sign_word(diff, band);
        rep.rows.push_back({snaps.ts[k], w.z(), w.str()});
        if (k > 0) {
            if (w.z() > prev.z()) rep.z_monotone = false;
            if (!is_subword(w, prev)) rep.subword_chain = false;
        }
        prev = w;
    }
    return rep;
}

// Dead-zone calibration: 10x the grid-halving discretization error of a short
// homogeneous front run.
inline double calibrate_band(const PeriodicMedium& med, double L, double h, double t_run = 5.0) {
    Grid1D g1(-20.0, 20.0, h);
    Grid1D g2(-20.0, 20.0, h / 2.0);
    auto init = [](double x) { return 1.0 / (1.0 + std::exp(x / std::sqrt(2.0))); };
    SolverConfig cfg;
    cfg.dt = h * h / 2.0;
    cfg.snapshot_stride = 1 << 30;
    Field f1 = evolve(med, L, Field(g1, init), t_run, cfg);
    SolverConfig cfg2 = cfg;
    cfg2.dt = h * h / 8.0;
    Field f2 = evolve(med, L, Field(g2, init), t_run, cfg2);
    double sup = 0.0;
    for (int i = 0; i < g1.n; ++i) sup = std::max(sup, std::abs(f1.u[i] - f2.u[2 * i]));
    return 10.0 * sup;
}

} // namespace pulsefront
