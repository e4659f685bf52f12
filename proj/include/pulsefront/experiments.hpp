#pragma once

// Experiment orchestration behind the CLI: each runner turns a config into a
// result table with one pass flag per row. (medium, L) cases execute on a
// small work queue; rows are joined in input order after all cases finish,
// so identical configs give identical files at any parallelism degree.

#include <atomic>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pulsefront/config.hpp"
#include "pulsefront/envelopes.hpp"
#include "pulsefront/fronts.hpp"
#include "pulsefront/homowave.hpp"
#include "pulsefront/io.hpp"
#include "pulsefront/medium.hpp"
#include "pulsefront/pdesolver.hpp"
#include "pulsefront/zeros.hpp"

namespace pulsefront {

inline std::string fmt(double v, const char* f = "%.8g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

struct ExperimentConfig {
    ConfigDoc doc;
    PeriodicMedium medium;
    std::string experiment;
    std::vector<double> Ls{12.0, 24.0, 48.0};
    double eps = 0.05;
    double h = 0.05;
    double dt = 0.005;
    int snapshot_stride = 0; // 0 => pick from h and the expected speed
    double domain_pad = 30.0;
    std::string out_dir = "out";
    int jobs = 1;
    std::string hash;
};

inline ExperimentConfig experiment_from_doc(const ConfigDoc& doc, const std::string& raw_text) {
    ExperimentConfig cfg;
    cfg.doc = doc;
    cfg.medium = medium_from_config(doc);
    cfg.experiment = doc.get("experiment", "kind");
    if (doc.has("experiment", "L")) cfg.Ls = doc.get_list("experiment", "L");
    for (const double L : cfg.Ls)
        if (L < 4.0) throw std::invalid_argument("config: L values must be >= 4");
    cfg.eps = doc.get_double_or("experiment", "eps", 0.05);
    cfg.h = doc.get_double_or("solver", "h", 0.05);
    cfg.dt = doc.get_double_or("solver", "dt", 0.005);
    cfg.snapshot_stride = doc.get_int_or("solver", "snapshot_stride", 0);
    cfg.domain_pad = doc.get_double_or("solver", "domain_pad", 30.0);
    cfg.out_dir = doc.get_or("output", "dir", "out");
    cfg.jobs = doc.get_int_or("run", "jobs", 1);
    cfg.hash = config_hash(raw_text);
    return cfg;
}

inline ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return experiment_from_doc(parse_config(buf.str()), buf.str());
}

inline bool medium_has_constant_b(const PeriodicMedium& med) {
    const double v0 = med.b(0.0);
    for (int i = 1; i < 64; ++i)
        if (std::abs(med.b(i / 64.0) - v0) > 1e-12) return false;
    return true;
}

namespace detail {

template <class Fn>
void parallel_for(int jobs, int n, const Fn& body) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    const int k = std::min(jobs, n);
    pool.reserve(k);
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline int stride_for(double h, double dt, double speed) {
    return std::max(1, static_cast<int>(std::floor(h / (std::abs(speed) * dt))));
}

} // namespace detail

// One long run: speed measurement from front-like data, then a continuation
// recording snapshots over a little more than one time period.
struct FrontRun {
    SpeedEstimate speed;
    SnapshotSet snaps;
};

inline FrontRun run_front(const PeriodicMedium& med, double L, double h, double dt, double pad,
                          SpeedMeasureOptions opts, bool record_period = true,
                          bool reverse = false, int travel_dir = +1) {
    // distance budget: the measurement phase plus, when a period is recorded
    // afterwards, the continuation travel and the extraction window
    const double periods =
        std::max(static_cast<double>(opts.burn_in_periods + opts.measure_periods + 2),
                 opts.budget_periods);
    const double travel = periods * L + (record_period ? 1.3 * L + 40.0 : 0.5 * L);
    SolverConfig scfg;
    scfg.dt = dt;
    scfg.snapshot_stride = detail::stride_for(h, dt, opts.expected_speed);
    scfg.reaction_lipschitz = med.reaction_lipschitz();

    FrontRun out;
    Field final_field;
    if (!reverse) {
        const double lo = travel_dir > 0 ? -pad : (travel_dir < 0 ? -travel - pad : -2.0 * L - pad);
        const double hi = travel_dir > 0 ? travel + pad : (travel_dir < 0 ? pad : 2.0 * L + pad);
        Grid1D g(lo, hi, h);
        out.speed = measure_speed(med, L, front_like_init(g, 0.0), scfg, opts, &final_field);
    } else {
        Grid1D g(-travel - pad, pad, h);
        out.speed = measure_reverse_speed(med, L, g, 0.0, scfg, opts);
        record_period = false;
    }
    if (!record_period || !out.speed.converged || out.speed.c_L == 0.0) return out;

    // continuation over a little more than one period; snapshots are sliced
    // to a window around the traveling transition
    const double period = L / std::abs(out.speed.c_L);
    SolverConfig ccfg = scfg;
    ccfg.snapshot_stride = std::max(1, detail::stride_for(h, dt, out.speed.c_L) / 2);
    SnapshotSet snaps;
    const double t_target = final_field.t + 1.05 * period;
    const double x_front = level_position(final_field);
    const double win_lo = x_front - 40.0;
    const double win_hi = x_front + 1.05 * L + 40.0;
    evolve(med, L, std::move(final_field), t_target, ccfg,
           record_snapshots_window(snaps, win_lo, win_hi));
    out.snaps = std::move(snaps);
    return out;
}

inline Table run_speed_sweep(const ExperimentConfig& cfg) {
    Table t;
    t.name = "speed-sweep";
    t.columns = {"L", "c_L", "c_star", "abs_error", "converged", "pass", "note"};
    const LimitSpeedResult ls = limit_speed(cfg.medium, 32);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/limit-speed.json", limit_speed_json_text(ls));

    struct Row { double L = 0, cL = 0; bool conv = false; std::string err; };
    std::vector<Row> rows(cfg.Ls.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(cfg.Ls.size()), [&](int i) {
        Row r;
        r.L = cfg.Ls[i];
        try {
            SpeedMeasureOptions opts;
            opts.expected_speed = std::abs(ls.c_star);
            const FrontRun fr = run_front(cfg.medium, r.L, cfg.h, cfg.dt, cfg.domain_pad, opts,
                                          /*record_period=*/false);
            r.cL = fr.speed.c_L;
            r.conv = fr.speed.converged;
            write_text(cfg.out_dir + "/speed-L" + fmt(r.L, "%g") + ".json",
                       speed_report_json_text(r.L, fr.speed));
        } catch (const std::exception& e) {
            r.err = e.what();
        }
        rows[i] = r;
    });
    for (const Row& r : rows)
        t.add_row({fmt(r.L), fmt(r.cL, "%.8f"), fmt(ls.c_star, "%.8f"),
                   fmt(std::abs(r.cL - ls.c_star), "%.3e"), r.conv ? "1" : "0",
                   (r.conv && r.err.empty()) ? "1" : "0", r.err});
    return t;
}

inline Table run_reverse_speed(const ExperimentConfig& cfg) {
    Table t;
    t.name = "reverse-speed";
    t.columns = {"L", "c_L", "c_tilde_L", "c_star", "pass", "note"};
    const LimitSpeedResult ls = limit_speed(cfg.medium, 32);

    struct Row { double L = 0, cL = 0, ctL = 0; bool ok = false; std::string err; };
    std::vector<Row> rows(cfg.Ls.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(cfg.Ls.size()), [&](int i) {
        Row r;
        r.L = cfg.Ls[i];
        try {
            SpeedMeasureOptions opts;
            opts.expected_speed = std::abs(ls.c_star);
            const FrontRun fwd = run_front(cfg.medium, r.L, cfg.h, cfg.dt, cfg.domain_pad, opts,
                                           false);
            const FrontRun rev = run_front(cfg.medium, r.L, cfg.h, cfg.dt, cfg.domain_pad, opts,
                                           false, /*reverse=*/true);
            r.cL = fwd.speed.c_L;
            r.ctL = rev.speed.c_L;
            // closeness to c* is an asymptotic property judged by the sweeps;
            // a row passes when both directions converged
            r.ok = fwd.speed.converged && rev.speed.converged;
        } catch (const std::exception& e) {
            r.err = e.what();
        }
        rows[i] = r;
    });
    for (const Row& r : rows)
        t.add_row({fmt(r.L), fmt(r.cL, "%.8f"), fmt(r.ctL, "%.8f"), fmt(ls.c_star, "%.8f"),
                   r.ok ? "1" : "0", r.err});
    return t;
}

// Extraction window centered on the front's absolute-frame offset. The lattice
// must resolve the phase shift zeta_L(y), whose slope grows like L, so the
// default y-resolution scales with L.
inline PulsatingFront extract_from_run(const PeriodicMedium& med, double L, const FrontRun& fr,
                                       double half_width = 25.0, int n_y = 0,
                                       double dxi = 0.05) {
    Field first;
    first.grid = fr.snaps.grid;
    first.t = fr.snaps.ts.front();
    first.u = fr.snaps.us.front();
    const double center = level_position(first) - fr.speed.c_L * first.t;
    ExtractOptions eo;
    eo.n_y = n_y > 0 ? n_y : std::clamp(static_cast<int>(std::lround(32.0 * L / 12.0)), 32, 160);
    eo.dxi = dxi;
    eo.xi_lo = center - half_width;
    eo.xi_hi = center + half_width;
    return extract_pulsating_front(med, L, fr.snaps, fr.speed.c_L, eo);
}

inline Table run_profile_sweep(const ExperimentConfig& cfg) {
    Table t;
    t.name = "profile-sweep";
    t.columns = {"L", "profile_sup_error", "zeta_residual_A4", "pass", "note"};
    if (!validate(cfg.medium).passed_a4)
        throw std::invalid_argument("profile-sweep: medium must satisfy (A4)");
    const WaveFamily fam = solve_wave_family(cfg.medium, 32);
    const auto cfun = [&fam](double y) { return fam.speed(y); };
    const LimitSpeedResult ls = limit_speed_of(cfun, 64);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/limit-speed.json", limit_speed_json_text(ls));
    write_text(cfg.out_dir + "/wave-y0.csv", wave_csv_text(fam.waves.front()));

    struct Row { double L = 0, perr = 0, zres = 0; bool ok = false; std::string err; };
    std::vector<Row> rows(cfg.Ls.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(cfg.Ls.size()), [&](int i) {
        Row r;
        r.L = cfg.Ls[i];
        try {
            SpeedMeasureOptions opts;
            opts.expected_speed = std::abs(ls.c_star);
            const FrontRun fr = run_front(cfg.medium, r.L, cfg.h, cfg.dt, cfg.domain_pad, opts);
            if (!fr.speed.converged) throw std::runtime_error("speed did not converge");
            const PulsatingFront front = extract_from_run(cfg.medium, r.L, fr);
            r.perr = profile_error(front, fam, 8.0);
            r.zres = zeta_residual(front, cfun, fr.speed.c_L, 4.0);
            r.ok = std::isfinite(r.perr) && std::isfinite(r.zres);
            write_text(cfg.out_dir + "/front-L" + fmt(r.L, "%g") + ".csv",
                       front_lattice_csv_text(front));
            write_text(cfg.out_dir + "/zeta-L" + fmt(r.L, "%g") + ".csv", zeta_csv_text(front));
            write_text(cfg.out_dir + "/speed-L" + fmt(r.L, "%g") + ".json",
                       speed_report_json_text(r.L, fr.speed));
        } catch (const std::exception& e) {
            r.err = e.what();
        }
        rows[i] = r;
    });
    for (const Row& r : rows)
        t.add_row({fmt(r.L), fmt(r.perr, "%.4e"), fmt(r.zres, "%.4e"), r.ok ? "1" : "0", r.err});
    return t;
}

inline Table run_width_sweep(const ExperimentConfig& cfg, double delta = 0.1) {
    Table t;
    t.name = "width-sweep";
    t.columns = {"medium", "L", "time_diam", "space_diam", "min_dt_U", "pass", "note"};

    std::vector<std::pair<std::string, PeriodicMedium>> media{{"medium", cfg.medium}};
    if (cfg.doc.sections.count("medium2")) {
        ConfigDoc d2;
        d2.sections["medium"] = cfg.doc.sections.at("medium2");
        media.emplace_back("medium2", medium_from_config(d2));
    }

    struct Row {
        std::string name;
        double L = 0, td = 0, sd = 0, mdu = 0;
        bool ok = false;
        std::string err;
    };
    std::vector<Row> rows(media.size() * cfg.Ls.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(rows.size()), [&](int idx) {
        const auto& [name, med] = media[idx / cfg.Ls.size()];
        Row r;
        r.name = name;
        r.L = cfg.Ls[idx % cfg.Ls.size()];
        try {
            const LimitSpeedResult ls = limit_speed(med, 16);
            SpeedMeasureOptions opts;
            opts.expected_speed = std::abs(ls.c_star);
            const FrontRun fr = run_front(med, r.L, cfg.h, cfg.dt, cfg.domain_pad, opts);
            if (!fr.speed.converged) throw std::runtime_error("speed did not converge");
            const WidthStats ws = width_stats(fr.snaps, delta);
            r.td = ws.max_time_diam;
            r.sd = ws.max_space_diam;
            r.mdu = ws.min_dt_U;
            r.ok = r.mdu > 0.0;
        } catch (const std::exception& e) {
            r.err = e.what();
        }
        rows[idx] = r;
    });
    for (const Row& r : rows)
        t.add_row({r.name, fmt(r.L), fmt(r.td, "%.6g"), fmt(r.sd, "%.6g"), fmt(r.mdu, "%.4e"),
                   r.ok ? "1" : "0", r.err});
    return t;
}

// The three canonical media of the sign classification: positive mean
// reaction, negative mean reaction, and sign-indefinite mean with constant
// linearizations (the stationary regime).
inline std::vector<std::pair<std::string, PeriodicMedium>> sign_classify_media() {
    return {{"positive-mean", make_cubic_medium(1.0, 0.25, 0.1)},
            {"negative-mean", make_cubic_medium(1.0, 0.75)},
            {"indefinite-mean", make_a4_medium(0.5, 0.02, 0.1)}};
}

inline Table run_sign_classify(const ExperimentConfig& cfg) {
    Table t;
    t.name = "sign-classify";
    t.columns = {"medium", "L", "c_L", "converged", "expected", "pass", "note"};
    const double L = cfg.Ls.back();
    const auto media = sign_classify_media();
    const char* expected[3] = {"positive", "negative", "stall"};

    struct Row { double cL = 0; bool conv = false, ok = false; std::string err; };
    std::vector<Row> rows(media.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(media.size()), [&](int i) {
        Row r;
        try {
            const PeriodicMedium& med = media[i].second;
            SpeedMeasureOptions opts;
            opts.expected_speed = 0.2; // nominal cubic speed scale for budgets
            opts.stall_speed_band = 0.02;
            const int dir = (i == 0) ? +1 : (i == 1 ? -1 : 0);
            const FrontRun fr =
                run_front(med, L, cfg.h, cfg.dt, cfg.domain_pad, opts, false, false, dir);
            r.cL = fr.speed.c_L;
            r.conv = fr.speed.converged;
            if (i == 0) r.ok = r.conv && r.cL > 0.0;
            if (i == 1) r.ok = r.conv && r.cL < 0.0;
            if (i == 2) r.ok = !r.conv && std::abs(r.cL) <= opts.stall_speed_band;
        } catch (const std::exception& e) {
            r.err = e.what();
        }
        rows[i] = r;
    });
    for (std::size_t i = 0; i < media.size(); ++i)
        t.add_row({media[i].first, fmt(L), fmt(rows[i].cL, "%.6f"), rows[i].conv ? "1" : "0",
                   expected[i], rows[i].ok ? "1" : "0", rows[i].err});
    return t;
}

struct EnvelopeAuditRow {
    double L = 0, eps = 0, L1eps = 0;
    double lower = 0, upper = 0;
    double T_tilde = 0, T_L = 0;
    double X_TL_err = 0, X_2TL_err = 0;
    bool ok = false;
    std::string err;
};

inline EnvelopeAuditRow envelope_audit_case(const PeriodicMedium& med, const WaveFamily& fam,
                                            double L, double eps, double y, double h, double dt,
                                            double violation_tol = 5e-3) {
    EnvelopeAuditRow r;
    r.L = L;
    r.eps = eps;
    const EnvelopeParams params = estimate_constants(med, fam, eps);
    r.L1eps = params.L1eps;
    if (L < params.L1eps) throw std::invalid_argument("L below the admissibility threshold");

    const auto cfun = [&fam](double z) { return fam.speed(z); };
    r.T_L = L / fam.c_star_exact();
    const PacedTrajectory traj = solve_X(cfun, y, L, 2.2 * r.T_L, 0.001 * L / fam.c_max());
    r.X_TL_err = std::abs(traj.value(r.T_L) - L);
    r.X_2TL_err = std::abs(traj.value(2.0 * r.T_L) - 2.0 * L);

    Grid1D g(-35.0, 2.0 * L + 45.0, h);
    Field init(g, [&fam, y](double x) { return fam.psi(x, y); });
    SolverConfig scfg;
    scfg.dt = dt;
    scfg.snapshot_stride = detail::stride_for(h, dt, fam.c_max());
    scfg.reaction_lipschitz = med.reaction_lipschitz();
    SnapshotSet snaps;
    ProbeSeries probe(g, std::vector<double>{L});
    auto obs_snap = record_snapshots(snaps);
    auto obs_probe = probe.observer();
    evolve_offset(med, y, L, std::move(init), 2.0 * r.T_L, scfg, [&](const Field& f) {
        obs_snap(f);
        obs_probe(f);
    });

    const ContainmentResult cr = check_containment(params, fam, traj, snaps);
    r.lower = cr.lower_violation;
    r.upper = cr.upper_violation;
    r.T_tilde = crossing_time_tilde(probe.ts, probe.vals[0]);
    r.ok = std::isfinite(r.T_tilde) && cr.max_violation() <= violation_tol &&
           r.X_TL_err <= 1e-6 && r.X_2TL_err <= 1e-6;
    return r;
}

inline Table run_envelope_audit(const ExperimentConfig& cfg) {
    Table t;
    t.name = "envelope-audit";
    t.columns = {"L",       "eps",     "L1eps", "max_violation_lower", "max_violation_upper",
                 "T_tilde", "T_L",     "X_TL_err", "X_2TL_err",        "pass",
                 "note"};
    if (!validate(cfg.medium).passed_a4)
        throw std::invalid_argument("envelope-audit: medium must satisfy (A4)");
    const WaveFamily fam = solve_wave_family(cfg.medium, 16);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/wave-y0.csv", wave_csv_text(fam.waves.front()));

    std::vector<EnvelopeAuditRow> rows(cfg.Ls.size());
    detail::parallel_for(cfg.jobs, static_cast<int>(cfg.Ls.size()), [&](int i) {
        try {
            rows[i] = envelope_audit_case(cfg.medium, fam, cfg.Ls[i], cfg.eps, 0.0, cfg.h, cfg.dt);
            write_text(cfg.out_dir + "/envelope-L" + fmt(rows[i].L, "%g") + ".json",
                       envelope_report_json_text(rows[i].eps, rows[i].L, rows[i].lower,
                                                 rows[i].upper, rows[i].T_tilde, rows[i].T_L));
        } catch (const std::exception& e) {
            rows[i].L = cfg.Ls[i];
            rows[i].eps = cfg.eps;
            rows[i].err = e.what();
        }
    });
    for (const auto& r : rows)
        t.add_row({fmt(r.L), fmt(r.eps), fmt(r.L1eps, "%.4g"), fmt(r.lower, "%.4e"),
                   fmt(r.upper, "%.4e"), fmt(r.T_tilde, "%.6g"), fmt(r.T_L, "%.6g"),
                   fmt(r.X_TL_err, "%.3e"), fmt(r.X_2TL_err, "%.3e"), r.ok ? "1" : "0", r.err});
    return t;
}

inline Table run_zeros_audit(const ExperimentConfig& cfg, int n_checkpoints = 20) {
    Table t;
    t.name = "zeros-audit";
    t.columns = {"comparator", "band", "z_monotone", "subword_chain", "terminal_word",
                 "terminal_ok", "pass", "note"};
    const PeriodicMedium& med = cfg.medium;
    const double L = cfg.Ls.front();
    const double band = calibrate_band(med, L, cfg.h);

    const double x_hi = 100.0;
    Grid1D g(0.0, x_hi, cfg.h);

    // comparators on the run's grid
    std::vector<std::pair<std::string, std::vector<double>>> comparators;
    for (const double frac : {1.0, 0.5}) {
        const StationarySolution sol = solve_stationary(med, L, frac * med.delta0, x_hi, cfg.h);
        comparators.emplace_back("decaying-delta" + fmt(frac * med.delta0, "%.4g"), sol.w);
    }
    if (medium_has_constant_b(med)) {
        comparators.emplace_back("constant-b", std::vector<double>(g.n, med.b(0.0)));
    }

    // one front run, 20 checkpoints
    SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.reaction_lipschitz = med.reaction_lipschitz();
    const double t_total = 120.0;
    Field init = front_like_init(g, 15.0);
    SnapshotSet checkpoints;
    const double t_step = t_total / (n_checkpoints - 1);
    double t_next_mark = 0.0;
    scfg.snapshot_stride = 1 << 30;
    Field fld = std::move(init);
    for (int k = 0; k < n_checkpoints; ++k) {
        if (k > 0) fld = evolve(med, L, std::move(fld), t_next_mark, scfg);
        checkpoints.grid = fld.grid;
        checkpoints.ts.push_back(fld.t);
        checkpoints.us.push_back(fld.u);
        t_next_mark += t_step;
    }

    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/checkpoints.csv", snapshots_csv_text(checkpoints));
    for (std::size_t ci = 0; ci < comparators.size(); ++ci) {
        const auto& [name, w] = comparators[ci];
        std::string err;
        ZeroReport rep;
        bool terminal_ok = false;
        try {
            rep = zero_monotonicity_report(checkpoints, w, band);
            write_text(cfg.out_dir + "/zeros-" + name + ".json", zeros_report_json_text(rep));
            const SignWord terminal = word_from(rep.rows.back().word);
            if (name == "constant-b") {
                terminal_ok = terminal.z() <= 2 &&
                              (terminal.z() < 2 || terminal == word_from("+-+"));
            } else {
                terminal_ok = is_subword(terminal, word_from("+-"));
            }
        } catch (const std::exception& e) {
            err = e.what();
        }
        const bool pass = err.empty() && rep.z_monotone && rep.subword_chain && terminal_ok;
        t.add_row({name, fmt(band, "%.3e"), rep.z_monotone ? "1" : "0",
                   rep.subword_chain ? "1" : "0",
                   rep.rows.empty() ? "" : rep.rows.back().word, terminal_ok ? "1" : "0",
                   pass ? "1" : "0", err});
    }
    return t;
}

inline Table run_experiment(const ExperimentConfig& cfg) {
    Table t;
    if (cfg.experiment == "speed-sweep") t = run_speed_sweep(cfg);
    else if (cfg.experiment == "reverse-speed") t = run_reverse_speed(cfg);
    else if (cfg.experiment == "profile-sweep") t = run_profile_sweep(cfg);
    else if (cfg.experiment == "width-sweep") t = run_width_sweep(cfg);
    else if (cfg.experiment == "sign-classify") t = run_sign_classify(cfg);
    else if (cfg.experiment == "envelope-audit") t = run_envelope_audit(cfg);
    else if (cfg.experiment == "zeros-audit") t = run_zeros_audit(cfg);
    else throw std::invalid_argument("unknown experiment kind '" + cfg.experiment + "'");

    t.meta.emplace_back("config_hash", cfg.hash);
    t.meta.emplace_back("h", fmt(cfg.h));
    t.meta.emplace_back("dt", fmt(cfg.dt));
    t.meta.emplace_back("domain_pad", fmt(cfg.domain_pad));
    return t;
}

} // namespace pulsefront
