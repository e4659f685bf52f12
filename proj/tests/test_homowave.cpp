#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pulsefront/homowave.hpp"

using namespace pulsefront;

namespace {
const double sqrt2 = std::sqrt(2.0);

double cubic_speed(double a, double b) { return std::sqrt(2.0 * a) * (0.5 - b); }

double logistic_profile(double xi, double a) { return 1.0 / (1.0 + std::exp(xi / std::sqrt(2.0 * a))); }
} // namespace

TEST_CASE("frozen wave speeds match the cubic closed form") {
    for (const auto& [a, b] : {std::pair{1.0, 0.25}, {2.0, 0.25}, {1.0, 0.45}, {0.5, 0.1}}) {
        const auto med = make_cubic_medium(a, b);
        const auto w = solve_frozen_wave(med, 0.0);
        CAPTURE(a, b);
        REQUIRE(std::abs(w.c - cubic_speed(a, b)) <= 1e-4);
        REQUIRE(w.residual_norm <= 1e-4);
    }
}

TEST_CASE("frozen wave profile matches the exact logistic front") {
    const auto med = make_cubic_medium(1.0, 0.25);
    const auto w = solve_frozen_wave(med, 0.0);

    // oracle sanity: the closed form satisfies the traveling-wave ODE
    const double c = cubic_speed(1.0, 0.25);
    for (const double xi : {-3.0, -0.7, 0.0, 1.3, 4.2}) {
        const double h = 1e-4;
        const double d2 =
            (logistic_profile(xi - h, 1.0) - 2.0 * logistic_profile(xi, 1.0) +
             logistic_profile(xi + h, 1.0)) / (h * h);
        const double d1 = (logistic_profile(xi + h, 1.0) - logistic_profile(xi - h, 1.0)) / (2 * h);
        const double u = logistic_profile(xi, 1.0);
        REQUIRE(std::abs(d2 + c * d1 + u * (1 - u) * (u - 0.25)) <= 1e-6);
    }

    double sup = 0.0;
    for (double xi = -20.0; xi <= 20.0; xi += 0.01)
        sup = std::max(sup, std::abs(w.value(xi) - logistic_profile(xi, 1.0)));
    REQUIRE(sup <= 1e-3);
    REQUIRE(w.value(sqrt2 * std::log(3.0)) == Catch::Approx(0.25).margin(1e-3));
    REQUIRE(w.value(0.0) == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(1.0 - w.psi.front() <= 1e-6);
    REQUIRE(w.psi.back() <= 1e-6);
}

TEST_CASE("negative-mass cubic yields the mirrored negative speed") {
    const auto med = make_cubic_medium(1.0, 0.75);
    const auto w = solve_frozen_wave(med, 0.0);
    REQUIRE(w.c == Catch::Approx(-cubic_speed(1.0, 0.25)).margin(1e-4));
    for (std::size_t i = 1; i < w.psi.size(); ++i) REQUIRE(w.psi[i] < w.psi[i - 1]);
}

TEST_CASE("speed bracket contains the true speed and scales with sqrt(a)") {
    const auto med1 = make_cubic_medium(1.0, 0.25);
    const auto [lo1, hi1] = frozen_speed_bracket(med1, 0.0);
    REQUIRE(lo1 == 0.0);
    REQUIRE(cubic_speed(1.0, 0.25) > lo1);
    REQUIRE(cubic_speed(1.0, 0.25) <= hi1);

    const auto med4 = make_cubic_medium(4.0, 0.25);
    const auto [lo4, hi4] = frozen_speed_bracket(med4, 0.0);
    REQUIRE(hi4 / hi1 == Catch::Approx(2.0).margin(1e-9));

    const auto med45 = make_cubic_medium(1.0, 0.45);
    const auto [lo45, hi45] = frozen_speed_bracket(med45, 0.0);
    REQUIRE(cubic_speed(1.0, 0.45) <= hi45);
    REQUIRE(cubic_speed(1.0, 0.45) == Catch::Approx(sqrt2 * 0.05).margin(1e-12));
}

TEST_CASE("speed bracket signals a missing positive partial mass") {
    const auto med = make_cubic_medium(1.0, 0.75);
    REQUIRE_THROWS_AS(frozen_speed_bracket(med, 0.0), std::runtime_error);
}

TEST_CASE("speed formula holds across the sinusoidal medium") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    for (int j = 0; j < 8; ++j) {
        const double y = j / 8.0;
        const auto w = solve_frozen_wave(med, y);
        REQUIRE(std::abs(w.c - cubic_speed(1.0, 0.25 + 0.1 * std::sin(two_pi * y))) <= 1e-4);
    }
}

TEST_CASE("waves are periodic in y") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const auto w0 = solve_frozen_wave(med, 0.3);
    const auto w1 = solve_frozen_wave(med, 1.3);
    REQUIRE(std::abs(w0.c - w1.c) <= 1e-10);
    double sup = 0.0;
    for (double xi = -15.0; xi <= 15.0; xi += 0.05)
        sup = std::max(sup, std::abs(w0.value(xi) - w1.value(xi)));
    REQUIRE(sup <= 1e-6);
}

TEST_CASE("profiles are strictly decreasing with a positive steepness floor") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const auto w = solve_frozen_wave(med, 0.2);
    double floor_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < w.psi.size(); ++i) {
        REQUIRE(w.dpsi[i] < 0.0);
        if (w.psi[i] >= 0.1 && w.psi[i] <= 0.9) floor_slope = std::max(floor_slope, w.dpsi[i]);
    }
    REQUIRE(floor_slope < 0.0); // max of dpsi over the band stays below some -gamma
}

TEST_CASE("harmonic mean limit speed against the closed form") {
    // int_0^1 dy/(A + B sin) = 1/sqrt(A^2 - B^2) scaled into the cubic family
    const auto cfun = [](double y) { return sqrt2 * (0.25 - 0.1 * std::sin(two_pi * y)); };
    const double exact = sqrt2 * std::sqrt(0.25 * 0.25 - 0.1 * 0.1);
    const auto quad = limit_speed_of(cfun, 64);
    REQUIRE(std::abs(quad.c_star - exact) <= 1e-8);
    REQUIRE(quad.quad_error_estimate <= 1e-8);

    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const auto ls = limit_speed(med, 32);
    REQUIRE(std::abs(ls.c_star - exact) <= 1e-6);
    REQUIRE(ls.c_star < sqrt2 * 0.25); // strictly below the arithmetic-mean speed
}

TEST_CASE("harmonic mean of a constant equals the constant") {
    const auto med = make_cubic_medium(1.0, 0.25);
    const auto ls = limit_speed(med, 8);
    REQUIRE(ls.c_star == Catch::Approx(cubic_speed(1.0, 0.25)).margin(1e-6));
}

TEST_CASE("limit speed propagates node failures with the offending y") {
    const auto med = make_cubic_medium(1.0, 0.5); // zero mean reaction, no wave
    REQUIRE_THROWS_WITH(limit_speed(med, 8), Catch::Matchers::ContainsSubstring("y = "));
}

TEST_CASE("limit speed brackets between extreme node speeds") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const auto fam = solve_wave_family(med, 16);
    const auto ls = limit_speed(med, 16);
    REQUIRE(ls.c_star >= fam.c_min() - 1e-12);
    REQUIRE(ls.c_star <= fam.c_max() + 1e-12);
}

TEST_CASE("decay rates from the margin formula") {
    // gamma0 = 0.2, a = 1, c = sqrt2/4: mu1 = (c + sqrt(c^2 + 0.8))/2
    const double c = cubic_speed(1.0, 0.25);
    const auto d = decay_rates(1.0, c, 0.2);
    REQUIRE(d.mu1 == Catch::Approx((c + std::sqrt(c * c + 0.8)) / 2.0).margin(1e-15));
    REQUIRE(d.mu2 == Catch::Approx((-c + std::sqrt(c * c + 0.8)) / 2.0).margin(1e-15));
    REQUIRE(d.mu1_tilde == d.mu2);

    const auto d0 = decay_rates(1.0, 0.0, 0.2);
    REQUIRE(d0.mu1 == Catch::Approx(std::sqrt(0.2)).margin(1e-15));
    REQUIRE(d0.mu1 == d0.mu1_tilde);
}

TEST_CASE("empirical tail slopes respect the analytic bounds") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.gamma0 = 0.2;
    med.delta0 = 0.04;
    const auto w = solve_frozen_wave(med, 0.0);
    const auto d = decay_bounds(med, w);
    // exact tails decay like e^{-xi/sqrt2}
    REQUIRE(d.empirical_right_slope == Catch::Approx(-1.0 / sqrt2).margin(1e-3));
    REQUIRE(d.empirical_left_slope == Catch::Approx(1.0 / sqrt2).margin(1e-3));
    REQUIRE(d.empirical_right_slope <= -d.mu1 + 1e-3);
    REQUIRE(d.empirical_left_slope >= d.mu2 - 1e-3);
}

TEST_CASE("adjoint kernel decays at least at the mu1_tilde rate") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.gamma0 = 0.2;
    const auto w = solve_frozen_wave(med, 0.0);
    const auto d = decay_rates(1.0, w.c, med.gamma0);
    const double w10 = std::abs(adjoint_kernel(w, 1.0, 10.0));
    const double w15 = std::abs(adjoint_kernel(w, 1.0, 15.0));
    REQUIRE(w15 <= w10 * std::exp(-d.mu1_tilde * 5.0) * 1.05);
}

TEST_CASE("y-derivative of the profile: vanishing, Richardson-consistent, bounded") {
    const auto homo = make_cubic_medium(1.0, 0.25);
    REQUIRE(dpsi_dy(homo, 0.4, 1e-3) <= 1e-6);

    // constant-a cubic media share one profile across y (only the speed
    // moves), so the sinusoidal-b family also gives a vanishing derivative
    const auto cub = make_cubic_medium(1.0, 0.25, 0.1);
    REQUIRE(dpsi_dy(cub, 0.2, 1e-2) <= 1e-4);

    // the bump perturbation genuinely bends the profile in y
    const auto med = make_a4_medium(0.25, 0.02, 0.1);
    const double d1 = dpsi_dy(med, 0.2, 1e-3);
    const double d2 = dpsi_dy(med, 0.2, 1e-2);
    REQUIRE(d1 > 1e-3);
    REQUIRE(std::abs(d1 - d2) / d1 <= 0.05);

    double sup = 0.0;
    for (int j = 0; j < 16; ++j) sup = std::max(sup, dpsi_dy(med, j / 16.0, 1e-3));
    REQUIRE(sup < 2.0);
    REQUIRE(sup > 1e-3);
}

TEST_CASE("wave family interpolates nodes exactly and periodically") {
    const auto med = make_cubic_medium(1.0, 0.25, 0.1);
    const auto fam = solve_wave_family(med, 16);
    REQUIRE(fam.psi(0.0, 0.25) == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(fam.speed(0.3125) == Catch::Approx(fam.waves[5].c).margin(1e-12));
    REQUIRE(fam.psi(1.7, 0.4) == Catch::Approx(fam.psi(1.7, 1.4)).margin(1e-12));
}
