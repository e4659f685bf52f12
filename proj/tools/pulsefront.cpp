// Experiment runner: `pulsefront run <config>` executes the configured sweep
// and writes <experiment>.{csv,json,dat} under the output directory;
// `pulsefront validate <config>` checks the medium assumptions only.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pulsefront/experiments.hpp"

using namespace pulsefront;

namespace {

int cmd_validate(const std::string& config_path) {
    const ConfigDoc doc = load_config(config_path);
    const PeriodicMedium med = medium_from_config(doc);
    const ValidationReport rep = validate(med);
    std::printf("A1 bistable zeros/sign pattern : %s\n", rep.passed_a1 ? "pass" : "FAIL");
    std::printf("A2 stability margins           : %s (gamma0=%.6g, delta0=%.6g)\n",
                rep.passed_a2 ? "pass" : "FAIL", rep.estimated_gamma0, rep.estimated_delta0);
    std::printf("A3 positive mean reaction      : %s (mean range [%.6g, %.6g])\n",
                rep.passed_a3 ? "pass" : "FAIL", rep.mean_reaction_min, rep.mean_reaction_max);
    std::printf("A4 banded x-independence       : %s\n", rep.passed_a4 ? "pass" : "fail");
    return (rep.passed_a1 && rep.passed_a2) ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& experiment_override,
            const std::string& out_override, int jobs_override) {
    ExperimentConfig cfg = load_experiment(config_path);
    if (!experiment_override.empty()) cfg.experiment = experiment_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (jobs_override > 0) cfg.jobs = jobs_override;

    const Table t = run_experiment(cfg);
    write_table(t, cfg.out_dir);

    std::printf("%s: %zu rows -> %s/%s.{csv,json,dat}\n", t.name.c_str(), t.rows.size(),
                cfg.out_dir.c_str(), t.name.c_str());
    for (const auto& row : t.rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c)
            line += (c ? "  " : "") + t.columns[c] + "=" + row[c];
        std::printf("  %s\n", line.c_str());
    }
    const bool ok = t.all_passed();
    std::printf("%s\n", ok ? "all rows passed" : "SOME ROWS FAILED");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulsating-front laboratory for periodic bistable media"};
    app.require_subcommand(1);

    std::string config_path, experiment_override, out_override;
    int jobs_override = 0;

    auto* run = app.add_subcommand("run", "run the configured experiment");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--experiment", experiment_override, "override the experiment kind");
    run->add_option("--out", out_override, "override the output directory");
    run->add_option("--jobs", jobs_override, "parallel workers over (medium, L) cases");

    auto* val = app.add_subcommand("validate", "validate the medium sections only");
    val->add_option("config", config_path, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("validate")) return cmd_validate(config_path);
        return cmd_run(config_path, experiment_override, out_override, jobs_override);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
