#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pulsefront/fronts.hpp"
#include "pulsefront/zeros.hpp"

using namespace pulsefront;

TEST_CASE("sign words: basics") {
    const std::vector<double> zeros(64, 0.0);
    REQUIRE(sign_word(zeros, 1e-12).z() == -1);
    REQUIRE(sign_word(zeros, 1e-12).str().empty());

    std::vector<double> sine(256);
    for (int i = 0; i < 256; ++i) sine[i] = std::sin(two_pi * i / 256.0);
    const auto ws = sign_word(sine, 1e-12);
    REQUIRE(ws.str() == "+-");
    REQUIRE(ws.z() == 1);

    const std::vector<double> alt{1.0, -1.0, 1.0};
    REQUIRE(sign_word(alt, 0.0).str() == "+-+");
    REQUIRE(sign_word(alt, 0.0).z() == 2);

    const std::vector<double> flat{0.3, 0.2, 0.9};
    REQUIRE(sign_word(flat, 0.0).z() == 0);
}

TEST_CASE("subword relation") {
    REQUIRE(is_subword(word_from("+-"), word_from("+-+")));
    REQUIRE_FALSE(is_subword(word_from("-+"), word_from("+-")));
    REQUIRE(is_subword(word_from(""), word_from("+-")));
    REQUIRE(is_subword(word_from("+-+"), word_from("+-+")));
    REQUIRE_FALSE(is_subword(word_from("+-+"), word_from("+-")));
}

TEST_CASE("halving the dead zone never decreases the sign-change count") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(200);
        for (auto& x : v) x = uni(rng);
        double band = 0.8;
        int prev = sign_word(v, band).z();
        for (int k = 0; k < 8; ++k) {
            band /= 2.0;
            const int z = sign_word(v, band).z();
            REQUIRE(z >= prev);
            prev = z;
        }
    }
}

TEST_CASE("stationary decaying solution with certified decay") {
    // scanned margins: the certificate must hold at every grid point
    const auto med = make_cubic_medium(1.0, 0.25);
    const double delta = med.delta0;
    const auto sol = solve_stationary(med, 8.0, delta, 40.0, 0.05);

    REQUIRE(sol.w.front() == Catch::Approx(delta).margin(1e-14));
    REQUIRE(sol.mu == Catch::Approx(std::sqrt(med.gamma0)).margin(1e-6));
    REQUIRE(sol.residual_norm <= 1e-8);
    for (std::size_t i = 0; i < sol.w.size(); ++i) {
        REQUIRE(sol.w[i] <= delta * std::exp(-sol.mu * sol.x[i]) + 1e-12);
        REQUIRE(sol.w[i] >= -1e-15);
        if (i > 0) REQUIRE(sol.w[i] <= sol.w[i - 1] + 1e-14);
    }

    // mu formula: constant a, gamma0 = 0.2 certifies mu = sqrt(0.2), and the
    // pair (0.2, 0.04) satisfies (A2), so the certificate holds there too
    auto med2 = make_cubic_medium(1.0, 0.25);
    med2.gamma0 = 0.2;
    med2.delta0 = 0.04;
    const auto sol2 = solve_stationary(med2, 8.0, 0.04, 40.0, 0.05);
    REQUIRE(sol2.mu == Catch::Approx(std::sqrt(0.2)).margin(1e-6));
    for (std::size_t i = 0; i < sol2.w.size(); ++i)
        REQUIRE(sol2.w[i] <= 0.04 * std::exp(-sol2.mu * sol2.x[i]) + 1e-12);
}

TEST_CASE("stationary solution agrees with a shooting oracle near the origin") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.gamma0 = 0.2;
    med.delta0 = 0.05;
    const auto sol = solve_stationary(med, 8.0, 0.05, 40.0, 0.025);

    // shoot w'' = -f(w) from (w(0), w'(0)); forward integration is unstable,
    // so compare over a short window only
    const double h = sol.x[1] - sol.x[0];
    double w = sol.w[0];
    double p = (-3.0 * sol.w[0] + 4.0 * sol.w[1] - sol.w[2]) / (2.0 * h);
    const double dt = 1e-4;
    double sup = 0.0;
    for (double x = 0.0; x < 5.0; x += dt) {
        const auto k = [&med](double w_, double p_) {
            return std::pair{p_, -med.f(0.0, w_)};
        };
        const auto [k1w, k1p] = k(w, p);
        const auto [k2w, k2p] = k(w + 0.5 * dt * k1w, p + 0.5 * dt * k1p);
        const auto [k3w, k3p] = k(w + 0.5 * dt * k2w, p + 0.5 * dt * k2p);
        const auto [k4w, k4p] = k(w + dt * k3w, p + dt * k3p);
        w += dt / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        p += dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        const double xq = x + dt;
        const int i = static_cast<int>(std::llround(xq / h));
        if (std::abs(i * h - xq) < 1e-9 && i < static_cast<int>(sol.w.size()))
            sup = std::max(sup, std::abs(w - sol.w[i]));
    }
    REQUIRE(sup <= 1e-4);
}

TEST_CASE("solve_stationary rejects delta above the margin width") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.delta0 = 0.05;
    REQUIRE_THROWS_AS(solve_stationary(med, 8.0, 0.2, 40.0), std::invalid_argument);
}

TEST_CASE("classification of stationary profiles") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.gamma0 = 0.2;
    med.delta0 = 0.05;
    const auto sol = solve_stationary(med, 8.0, 0.05, 40.0);
    const char tag = classify_stationary(sol.w, 1e-9);
    REQUIRE((tag == 'b' || tag == 'c')); // decaying solutions admit only these

    const std::vector<double> constant(100, 0.25);
    REQUIRE(classify_stationary(constant, 1e-12) == 'b');

    std::vector<double> ground(200);
    for (int i = 0; i < 200; ++i) {
        const double x = (i - 100) / 20.0;
        ground[i] = 0.6 * std::exp(-x * x) - 0.02;
    }
    REQUIRE(classify_stationary(ground, 1e-12) == 'e');

    std::vector<double> up(200), down(200);
    for (int i = 0; i < 200; ++i) {
        up[i] = -0.1 + 0.5 * i / 200.0;   // [-,+], below 1
        down[i] = 0.4 - 0.5 * i / 200.0;  // [+,-], below 1
    }
    REQUIRE(classify_stationary(up, 1e-12) == 'c');
    REQUIRE(classify_stationary(down, 1e-12) == 'd');

    std::vector<double> crossing(200);
    for (int i = 0; i < 200; ++i) crossing[i] = 1.2 - 1.4 * i / 200.0; // crosses 1 and 0
    REQUIRE(classify_stationary(crossing, 1e-12) == 'a');

    const std::vector<double> above(50, 1.5);
    REQUIRE_THROWS_AS(classify_stationary(above, 1e-12), std::runtime_error);
}

TEST_CASE("zero number monotonicity along a front run") {
    auto med = make_cubic_medium(1.0, 0.25);
    med.gamma0 = 0.17;
    med.delta0 = 0.05;
    const double L = 8.0, h = 0.05, x_hi = 60.0;
    Grid1D g(0.0, x_hi, h);
    const double band = calibrate_band(med, L, h);
    REQUIRE(band > 0.0);
    REQUIRE(band < 0.1);

    // checkpoints of a front run
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.snapshot_stride = 1 << 30;
    SnapshotSet checkpoints;
    Field fld = front_like_init(g, 12.0);
    for (int k = 0; k < 20; ++k) {
        if (k > 0) fld = evolve(med, L, std::move(fld), k * 4.0, cfg);
        checkpoints.grid = fld.grid;
        checkpoints.ts.push_back(fld.t);
        checkpoints.us.push_back(fld.u);
    }

    const auto decaying = solve_stationary(med, L, med.delta0, x_hi, h);
    const auto rep1 = zero_monotonicity_report(checkpoints, decaying.w, band);
    REQUIRE(rep1.z_monotone);
    REQUIRE(rep1.subword_chain);
    REQUIRE(is_subword(word_from(rep1.rows.back().word), word_from("+-")));

    const std::vector<double> constant(g.n, 0.25);
    const auto rep2 = zero_monotonicity_report(checkpoints, constant, band);
    REQUIRE(rep2.z_monotone);
    REQUIRE(rep2.subword_chain);
    const auto terminal = word_from(rep2.rows.back().word);
    REQUIRE(terminal.z() <= 2);
    if (terminal.z() == 2) REQUIRE(terminal == word_from("+-+"));
}

TEST_CASE("run identical to the comparator gives empty words throughout") {
    const auto med = make_cubic_medium(1.0, 0.25);
    Grid1D g(0.0, 30.0, 0.05);
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.boundary = BoundaryClamp{0.25, 0.25};
    cfg.snapshot_stride = 100;
    SnapshotSet snaps;
    evolve(med, 8.0, Field(g, 0.25), 3.0, cfg, record_snapshots(snaps));
    const std::vector<double> comparator(g.n, 0.25);
    const auto rep = zero_monotonicity_report(snaps, comparator, 1e-10);
    for (const auto& row : rep.rows) {
        REQUIRE(row.z == -1);
        REQUIRE(row.word.empty());
    }
}
