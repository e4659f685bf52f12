#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pulsefront/experiments.hpp"
#include "pulsefront/fronts.hpp"

using namespace pulsefront;

namespace {
const double c_exact = std::sqrt(2.0) * 0.25;
}

TEST_CASE("measured pulsating speed on the homogeneous cubic") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    const FrontRun fr = run_front(med, 16.0, 0.05, 0.005, 30.0, opts, false);
    REQUIRE(fr.speed.converged);
    REQUIRE(std::abs(fr.speed.c_L - c_exact) / c_exact <= 0.01);
    REQUIRE(fr.speed.rel_spread <= 0.01);
    REQUIRE(std::is_sorted(fr.speed.crossing_times.begin(), fr.speed.crossing_times.end()));
    // consecutive per-period speeds differ by <= 1% after burn-in
    const auto& pp = fr.speed.per_period_speeds;
    for (std::size_t i = 1; i < pp.size(); ++i)
        REQUIRE(std::abs(pp[i] - pp[i - 1]) / std::abs(pp[i]) <= 0.01);
}

TEST_CASE("negative-mean medium travels leftward at the mirrored speed") {
    const auto med = make_cubic_medium(1.0, 0.75);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    opts.measure_periods = 4;
    const FrontRun fr = run_front(med, 24.0, 0.05, 0.005, 30.0, opts, false, false, -1);
    REQUIRE(fr.speed.converged);
    REQUIRE(fr.speed.c_L < 0.0);
    REQUIRE(std::abs(fr.speed.c_L + c_exact) / c_exact <= 0.02);
}

TEST_CASE("sign-indefinite mean reaction stalls the front") {
    const auto med = make_a4_medium(0.5, 0.02, 0.1);
    SpeedMeasureOptions opts;
    opts.expected_speed = 0.2;
    opts.budget_periods = 6.0;
    const FrontRun fr = run_front(med, 24.0, 0.05, 0.01, 30.0, opts, false, false, 0);
    REQUIRE_FALSE(fr.speed.converged);
    REQUIRE(std::abs(fr.speed.c_L) <= 0.02);
}

TEST_CASE("reverse fronts: homogeneous symmetry") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    const FrontRun fwd = run_front(med, 16.0, 0.05, 0.005, 30.0, opts, false);
    const FrontRun rev = run_front(med, 16.0, 0.05, 0.005, 30.0, opts, false, true);
    REQUIRE(rev.speed.converged);
    REQUIRE(std::abs(rev.speed.c_L - fwd.speed.c_L) / fwd.speed.c_L <= 0.01);
}

TEST_CASE("reverse fronts: both speeds near c* on the sinusoidal medium") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const double c_star = limit_speed(med, 32).c_star;
    SpeedMeasureOptions opts;
    opts.expected_speed = c_star;
    opts.measure_periods = 4;
    const FrontRun fwd = run_front(med, 24.0, 0.05, 0.005, 30.0, opts, false);
    const FrontRun rev = run_front(med, 24.0, 0.05, 0.005, 30.0, opts, false, true);
    REQUIRE(fwd.speed.converged);
    REQUIRE(rev.speed.converged);
    REQUIRE(std::abs(fwd.speed.c_L - c_star) <= 0.05 * c_star);
    REQUIRE(std::abs(rev.speed.c_L - c_star) <= 0.05 * c_star);
}

TEST_CASE("extracted profile on a homogeneous medium is y-independent") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    const FrontRun fr = run_front(med, 16.0, 0.05, 0.005, 30.0, opts);
    REQUIRE(fr.speed.converged);
    const PulsatingFront front = extract_from_run(med, 16.0, fr);

    REQUIRE(front.phi_at(0.0, 0.0) == Catch::Approx(0.5).margin(1e-6));
    double dev = 0.0, zmax = 0.0;
    for (std::size_t j = 0; j < front.y_grid.size(); ++j) {
        zmax = std::max(zmax, std::abs(front.zeta[j]));
        for (std::size_t i = 0; i < front.xi_grid.size(); ++i)
            dev = std::max(dev, std::abs(front.phi[j][i] - front.phi[0][i]));
    }
    REQUIRE(dev <= 5e-3);
    REQUIRE(zmax <= 5e-3);

    // phi(zeta(y), y) = 1/2 and monotonicity in xi on the transition band
    for (std::size_t j = 0; j < front.y_grid.size(); ++j) {
        REQUIRE(front.phi_at(front.zeta[j], front.y_grid[j]) == Catch::Approx(0.5).margin(1e-6));
        for (std::size_t i = 1; i < front.xi_grid.size(); ++i)
            if (front.phi[j][i] > 1e-4 && front.phi[j][i] < 1.0 - 1e-4)
                REQUIRE(front.phi[j][i] < front.phi[j][i - 1] + 1e-9);
    }
}

TEST_CASE("width statistics against the exact logistic inversion") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    const FrontRun fr = run_front(med, 16.0, 0.05, 0.005, 30.0, opts);
    const WidthStats ws = width_stats(fr.snaps, 0.1);

    // exact 0.9..0.1 width of 1/(1+e^{xi/sqrt2}) is 2 sqrt2 ln 9
    const double exact_width = 2.0 * std::sqrt(2.0) * std::log(9.0);
    REQUIRE(ws.max_space_diam == Catch::Approx(exact_width).epsilon(0.03));
    REQUIRE(ws.max_time_diam == Catch::Approx(exact_width / c_exact).epsilon(0.03));
    REQUIRE(ws.min_dt_U > 0.0);

    // a snapshot set that never leaves the band has no resolvable widths
    SnapshotSet flat;
    flat.grid = Grid1D(-1.0, 1.0, 0.1);
    flat.ts = {0.0, 1.0, 2.0};
    flat.us.assign(3, std::vector<double>(flat.grid.n, 0.5));
    REQUIRE_THROWS_AS(width_stats(flat, 0.1), std::runtime_error);
}

TEST_CASE("profile error and phase-shift residual vanish on homogeneous media") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SpeedMeasureOptions opts;
    opts.expected_speed = c_exact;
    const FrontRun fr = run_front(med, 16.0, 0.05, 0.005, 30.0, opts);
    const PulsatingFront front = extract_from_run(med, 16.0, fr);
    const WaveFamily fam = solve_wave_family(med, 8);

    REQUIRE(profile_error(front, fam, 8.0) <= 5e-3);
    const auto cfun = [](double) { return c_exact; };
    REQUIRE(zeta_residual(front, cfun, fr.speed.c_L, 4.0) <= 0.05);

    REQUIRE_THROWS_AS(profile_error(front, fam, 500.0), std::invalid_argument);
}

TEST_CASE("extraction demands full period coverage and nonzero speed") {
    const auto med = make_cubic_medium(1.0, 0.25);
    SnapshotSet snaps;
    snaps.grid = Grid1D(-5.0, 5.0, 0.1);
    snaps.ts = {0.0, 1.0};
    snaps.us.assign(2, std::vector<double>(snaps.grid.n, 0.5));
    REQUIRE_THROWS_AS(extract_pulsating_front(med, 16.0, snaps, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(extract_pulsating_front(med, 16.0, snaps, 0.35), std::invalid_argument);

    // a lattice wider than the covered region aborts on the empty bin
    snaps.ts = {0.0, 50.0};
    REQUIRE_THROWS_WITH(extract_pulsating_front(med, 16.0, snaps, 0.35),
                        Catch::Matchers::ContainsSubstring("empty lattice bin"));
}
