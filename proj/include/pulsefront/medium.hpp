#pragma once

// Spatially periodic bistable media (a, f, b). Built-in families are the
// cubic reaction f(x,u) = u(1-u)(u-b(x)) with sinusoidal or tabulated
// coefficients, and the cubic plus a compactly supported bump perturbation
// whose reaction is x-independent near u = 0 and u = 1.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsefront/numerics.hpp"

namespace pulsefront {

enum class MediumKind { cubic, a4, custom_table };

// Serializable parameterization of the built-in media. Sinusoidal
// coefficient pairs are [c0, c1] meaning c0 + c1*sin(2*pi*y); tabulated
// coefficients are uniform samples on [0,1).
struct MediumSpec {
    MediumKind kind = MediumKind::cubic;
    std::vector<double> a_coef{1.0};
    std::vector<double> b_coef{0.25};
    bool a_tabulated = false;
    bool b_tabulated = false;
    double base_b = 0.25;   // a4 only
    double amp = 0.0;       // a4 only
    double delta0p = 0.0;   // a4 only
};

// C1 bump derived from the quintic smoothstep: value 1 at the midpoint,
// supported exactly on [d, 1-d].
inline double quintic_bump(double u, double d) {
    if (u <= d || u >= 1.0 - d) return 0.0;
    const double t = (u - d) / (1.0 - 2.0 * d);
    const double tau = t <= 0.5 ? 2.0 * t : 2.0 * (1.0 - t);
    return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
}

inline double quintic_bump_du(double u, double d) {
    if (u <= d || u >= 1.0 - d) return 0.0;
    const double t = (u - d) / (1.0 - 2.0 * d);
    const double tau = t <= 0.5 ? 2.0 * t : 2.0 * (1.0 - t);
    const double ds = 30.0 * tau * tau * (1.0 - tau) * (1.0 - tau);
    const double sign = t <= 0.5 ? 1.0 : -1.0;
    return sign * ds * 2.0 / (1.0 - 2.0 * d);
}

struct ValidationReport {
    bool passed_a1 = false, passed_a2 = false, passed_a3 = false, passed_a4 = false;
    double estimated_gamma0 = 0.0;
    double estimated_delta0 = 0.0;
    double mean_reaction_min = 0.0;
    double mean_reaction_max = 0.0;
};

class PeriodicMedium {
public:
    MediumSpec spec;
    std::function<double(double)> a_fn, b_fn;
    std::function<double(double, double)> f_fn;              // raw f on [0,1]
    std::function<double(double, double)> dfdu_fn, dfdx_fn;  // empty => centered differences
    double gamma0 = 0.0;   // (A2) margin, estimated at construction; adjustable
    double delta0 = 0.0;   // (A2) width
    std::optional<double> delta0p;
    bool a_is_constant = false;

    double a(double y) const { return a_fn(y); }
    double b(double y) const { return b_fn(y); }
    double f(double y, double u) const { return f_fn(y, u); }

    double dfdu(double x, double u) const {
        if (dfdu_fn) return dfdu_fn(x, u);
        const double h = 1e-6;
        return (f_fn(x, u + h) - f_fn(x, u - h)) / (2.0 * h);
    }
    double dfdx(double x, double u) const {
        if (dfdx_fn) return dfdx_fn(x, u);
        const double h = 1e-6;
        return (f_fn(x + h, u) - f_fn(x - h, u)) / (2.0 * h);
    }
    double dfdu0(double x) const { return dfdu(x, 0.0); }
    double dfdu1(double x) const { return dfdu(x, 1.0); }

    // Linear extension of f outside [0,1]: positive below 0, negative above 1.
    double extended_f(double x, double u) const {
        if (u < 0.0) return dfdu0(x) * u;
        if (u > 1.0) return dfdu1(x) * (u - 1.0);
        return f_fn(x, u);
    }

    // sup over the period and u in [0,1] of |df/du| (extension included: the
    // extension slopes are df/du at the seams).
    double reaction_lipschitz(int nx = 128, int nu = 256) const {
        double lip = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            for (int j = 0; j <= nu; ++j)
                lip = std::max(lip, std::abs(dfdu(x, static_cast<double>(j) / nu)));
        }
        return lip;
    }

    double a_max(int nx = 256) const {
        double m = 0.0;
        for (int i = 0; i < nx; ++i) m = std::max(m, a_fn(static_cast<double>(i) / nx));
        return m;
    }
};

namespace detail {

inline void scan_margins(const PeriodicMedium& med, int nx, int nu,
                         double& gamma0, double& delta0) {
    // Stability floor near the two stable states; margin at width delta is the
    // infimum of -f/u on (0,delta] and of f/(1-u) on [1-delta,1).
    double m0 = std::numeric_limits<double>::max();
    for (int i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / nx;
        m0 = std::min(m0, std::min(-med.dfdu0(x), -med.dfdu1(x)));
    }
    gamma0 = 0.0;
    delta0 = 0.0;
    if (!(m0 > 0.0)) return;

    auto margin = [&](double delta) {
        double m = std::numeric_limits<double>::max();
        for (int i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            for (int j = 1; j <= nu; ++j) {
                const double u = delta * j / nu;
                m = std::min(m, -med.f_fn(x, u) / u);
                m = std::min(m, med.f_fn(x, 1.0 - u) / u);
            }
        }
        return m;
    };

    const int n_cand = 64;
    for (int k = n_cand; k >= 1; --k) {
        const double delta = 0.25 * k / n_cand;
        const double m = margin(delta);
        if (m >= 0.75 * m0) {
            delta0 = delta;
            gamma0 = 0.9 * m;
            return;
        }
    }
}

inline void check_b_range(const std::function<double(double)>& b_fn, int n = 1024) {
    for (int i = 0; i < n; ++i) {
        const double v = b_fn(static_cast<double>(i) / n);
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("make_cubic_medium: b must take values in (0,1)");
    }
}

inline bool sampled_constant(const std::function<double(double)>& g, int n = 512) {
    const double v0 = g(0.0);
    for (int i = 1; i < n; ++i)
        if (std::abs(g(static_cast<double>(i) / n) - v0) > 1e-13 * (1.0 + std::abs(v0)))
            return false;
    return true;
}

} // namespace detail

// Cubic medium from arbitrary periodic coefficient functions. Recorded for
// serialization as tabulated coefficients.
inline PeriodicMedium make_cubic_medium(std::function<double(double)> a_fn,
                                        std::function<double(double)> b_fn,
                                        int table_n = 256) {
    detail::check_b_range(b_fn);
    PeriodicMedium med;
    med.a_fn = std::move(a_fn);
    med.b_fn = std::move(b_fn);
    const auto& bf = med.b_fn;
    med.f_fn = [bf](double x, double u) { return u * (1.0 - u) * (u - bf(x)); };
    med.dfdu_fn = [bf](double x, double u) {
        const double b = bf(x);
        return -3.0 * u * u + 2.0 * (1.0 + b) * u - b;
    };
    med.dfdx_fn = [bf](double x, double u) {
        const double h = 1e-6;
        return -u * (1.0 - u) * (bf(x + h) - bf(x - h)) / (2.0 * h);
    };
    med.a_is_constant = detail::sampled_constant(med.a_fn);
    med.spec.kind = MediumKind::custom_table;
    med.spec.a_tabulated = med.spec.b_tabulated = true;
    med.spec.a_coef.resize(table_n);
    med.spec.b_coef.resize(table_n);
    for (int i = 0; i < table_n; ++i) {
        med.spec.a_coef[i] = med.a_fn(static_cast<double>(i) / table_n);
        med.spec.b_coef[i] = med.b_fn(static_cast<double>(i) / table_n);
    }
    detail::scan_margins(med, 128, 64, med.gamma0, med.delta0);
    return med;
}

// Built-in cubic with sinusoidal coefficients a(y) = a0 + a1 sin(2 pi y),
// b(y) = b0 + b1 sin(2 pi y). Serializes losslessly.
inline PeriodicMedium make_cubic_medium(double a0, double b0, double b1 = 0.0,
                                        double a1 = 0.0) {
    PeriodicMedium med;
    med.a_fn = [a0, a1](double y) { return a0 + a1 * std::sin(two_pi * y); };
    med.b_fn = [b0, b1](double y) { return b0 + b1 * std::sin(two_pi * y); };
    detail::check_b_range(med.b_fn);
    const auto bf = med.b_fn;
    med.f_fn = [bf](double x, double u) { return u * (1.0 - u) * (u - bf(x)); };
    med.dfdu_fn = [bf](double x, double u) {
        const double b = bf(x);
        return -3.0 * u * u + 2.0 * (1.0 + b) * u - b;
    };
    med.dfdx_fn = [b1](double x, double u) {
        return -u * (1.0 - u) * b1 * two_pi * std::cos(two_pi * x);
    };
    med.a_is_constant = (a1 == 0.0);
    med.spec.kind = MediumKind::cubic;
    med.spec.a_coef = {a0, a1};
    med.spec.b_coef = {b0, b1};
    detail::scan_margins(med, 128, 64, med.gamma0, med.delta0);
    return med;
}

inline ValidationReport validate(const PeriodicMedium& med, int nx = 128, int nu = 128);

// Constant diffusivity a, reaction f(x,u) = u(1-u)(u-base_b) +
// amp sin(2 pi x) w(u) with w the quintic bump supported on
// [delta0p, 1-delta0p]. The reaction is x-independent on
// [0,delta0p] and [1-delta0p,1].
inline PeriodicMedium make_a4_medium(double base_b, double amp, double delta0p,
                                     double a0 = 1.0) {
    if (!(base_b > 0.0 && base_b < 1.0))
        throw std::invalid_argument("make_a4_medium: base_b must lie in (0,1)");
    if (!(delta0p > 0.0 && delta0p < 0.5))
        throw std::invalid_argument("make_a4_medium: delta0p must lie in (0,1/2)");
    PeriodicMedium med;
    med.a_fn = [a0](double) { return a0; };
    med.f_fn = [base_b, amp, delta0p](double x, double u) {
        return u * (1.0 - u) * (u - base_b) +
               amp * std::sin(two_pi * x) * quintic_bump(u, delta0p);
    };
    med.dfdu_fn = [base_b, amp, delta0p](double x, double u) {
        return -3.0 * u * u + 2.0 * (1.0 + base_b) * u - base_b +
               amp * std::sin(two_pi * x) * quintic_bump_du(u, delta0p);
    };
    med.dfdx_fn = [amp, delta0p](double x, double u) {
        return amp * two_pi * std::cos(two_pi * x) * quintic_bump(u, delta0p);
    };
    const auto f = med.f_fn;
    med.b_fn = [f](double x) {
        return bisect([&](double u) { return f(x, u); }, 1e-9, 1.0 - 1e-9, 1e-14);
    };
    med.a_is_constant = true;
    med.delta0p = delta0p;
    med.spec.kind = MediumKind::a4;
    med.spec.a_coef = {a0};
    med.spec.base_b = base_b;
    med.spec.amp = amp;
    med.spec.delta0p = delta0p;
    detail::scan_margins(med, 128, 64, med.gamma0, med.delta0);
    const ValidationReport rep = validate(med, 128, 128);
    if (!rep.passed_a1)
        throw std::invalid_argument("make_a4_medium: amplitude breaks the bistable structure (A1)");
    return med;
}

// Medium with tabulated a(y), b(y) samples (periodic linear interpolation)
// and the cubic reaction built from b.
inline PeriodicMedium make_table_medium(std::vector<double> a_tab, std::vector<double> b_tab) {
    if (a_tab.size() < 2 || b_tab.size() < 2)
        throw std::invalid_argument("make_table_medium: need at least 2 samples");
    auto a_fn = [t = std::move(a_tab)](double y) { return lerp_periodic(t, y); };
    auto b_fn = [t = std::move(b_tab)](double y) { return lerp_periodic(t, y); };
    return make_cubic_medium(std::move(a_fn), std::move(b_fn));
}

inline ValidationReport validate(const PeriodicMedium& med, int nx, int nu) {
    if (nx < 64 || nu < 64)
        throw std::invalid_argument("validate: nx and nu must be >= 64");
    ValidationReport rep;

    // (A1): pinned zeros and the sign pattern around b(x).
    bool a1 = true;
    for (int i = 0; i < nx && a1; ++i) {
        const double x = static_cast<double>(i) / nx;
        const double bx = med.b(x);
        if (!(bx > 0.0 && bx < 1.0) || std::abs(med.f(x, 0.0)) > 1e-12 ||
            std::abs(med.f(x, 1.0)) > 1e-12 || std::abs(med.f(x, bx)) > 1e-9) {
            a1 = false;
            break;
        }
        const double skip = 2.0 / nu;
        for (int j = 1; j < nu; ++j) {
            const double u = static_cast<double>(j) / nu;
            if (std::abs(u - bx) < skip) continue;
            const double v = med.f(x, u);
            if ((u < bx && v >= 0.0) || (u > bx && v <= 0.0)) {
                a1 = false;
                break;
            }
        }
    }
    rep.passed_a1 = a1;

    detail::scan_margins(med, nx, std::max(32, nu / 4), rep.estimated_gamma0,
                         rep.estimated_delta0);
    rep.passed_a2 = rep.estimated_gamma0 > 0.0;

    // (A3): positive mean reaction and instability of b(x).
    double mr_min = std::numeric_limits<double>::max();
    double mr_max = std::numeric_limits<double>::lowest();
    bool b_unstable = true;
    const int m = nu + (nu % 2); // Simpson needs an even interval count
    for (int i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / nx;
        double s = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            s += w * med.f(x, static_cast<double>(j) / m);
        }
        s /= 3.0 * m;
        mr_min = std::min(mr_min, s);
        mr_max = std::max(mr_max, s);
        if (a1 && med.dfdu(x, med.b(x)) <= 0.0) b_unstable = false;
    }
    rep.mean_reaction_min = mr_min;
    rep.mean_reaction_max = mr_max;
    rep.passed_a3 = a1 && b_unstable && mr_min > 0.0;

    // (A4): constant a and x-independent reaction on the outer u-bands.
    rep.passed_a4 = false;
    if (med.delta0p && med.a_is_constant) {
        const double d = *med.delta0p;
        double spread = 0.0;
        for (int j = 0; j <= 16; ++j) {
            for (const double u : {d * j / 16.0, 1.0 - d * j / 16.0}) {
                double lo = std::numeric_limits<double>::max(), hi = -lo;
                for (int i = 0; i < nx; ++i) {
                    const double v = med.f(static_cast<double>(i) / nx, u);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                spread = std::max(spread, hi - lo);
            }
        }
        rep.passed_a4 = spread <= 1e-12;
    }
    return rep;
}

} // namespace pulsefront
