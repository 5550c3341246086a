// Command-line driver: simulation runs, criterion evaluation, parameter
// sweeps, and the empirical estimators.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "arks/config.hpp"
#include "arks/criteria.hpp"
#include "arks/oracles.hpp"
#include "arks/sweep.hpp"

namespace fs = std::filesystem;
using namespace arks;

namespace {

void write_text(const std::string& path, const std::vector<std::string>& header,
                const std::string& body) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header) os << "# " << line << '\n';
    os << body;
}

int cmd_run(RunConfig cfg, const std::string& out_override) {
    if (!out_override.empty()) cfg.output.dir = out_override;
    const fs::path out(cfg.output.dir);
    fs::create_directories(out);
    const auto header = cfg.echo_lines();

    SimState init = cfg.make_initial_state();
    const double p = cfg.resolve_monitor_p();
    const double threshold = cfg.monitor.threshold_auto
                                 ? 1e6 * (linf_norm(init.u) + 1.0)
                                 : cfg.monitor.blowup_threshold;

    const RegimeReport report =
        classify_regime(cfg.model, cfg.monitor.c_reg, cfg.monitor.epsilon);
    write_text((out / "regime.txt").string(), header, report_to_kv(report));
    write_text((out / "regime.csv").string(), header,
               report_csv_header() + "\n" + report_to_csv_row(report) + "\n");

    RunOptions opts;
    opts.dt_min = cfg.time.dt_min;
    opts.dt_max = cfg.time.dt_max;
    opts.cfl_safety = cfg.time.cfl_safety;
    opts.sample_stride = cfg.monitor.sample_stride;
    opts.extras.face_scheme = cfg.grid.face_scheme;
    opts.extras.gamma_g = cfg.resolve_gamma_g();
    if (cfg.output.snapshot_every > 0) {
        const int every = cfg.output.snapshot_every;
        opts.on_sample = [&, every](int idx, const SimState& s) {
            if (idx % every != 0) return;
            char name[64];
            std::snprintf(name, sizeof(name), "u_%06d.pgm", idx);
            write_pgm(s.u, (out / name).string(), header);
        };
    }

    const RunResult res =
        run_simulation(cfg.model, init, cfg.time.horizon, p, threshold, opts);

    write_norms_csv(res.series, (out / "norms.csv").string(), header);
    write_text((out / "verdict.txt").string(), header,
               verdict_to_line(res.verdict) + "\n" +
                   "accepted_steps=" + std::to_string(res.accepted_steps) +
                   " rejected_steps=" + std::to_string(res.rejected_steps) +
                   " clipped_mass=" + std::to_string(res.clipped_mass) + "\n");
    for (const auto& [name, field] :
         {std::pair<const char*, const ScalarField*>{"u", &res.final_state.u},
          {"v", &res.final_state.v},
          {"w", &res.final_state.w}}) {
        write_pgm(*field, (out / (std::string(name) + "_final.pgm")).string(), header);
        write_field_csv(*field, (out / (std::string(name) + "_final.csv")).string(),
                        header);
    }

    std::cout << verdict_to_line(res.verdict) << '\n';
    const bool bad = res.verdict.kind == VerdictKind::BlowupSuspected ||
                     res.verdict.kind == VerdictKind::StepCollapse;
    return bad ? 2 : 0;
}

int cmd_classify(const RunConfig& cfg) {
    const RegimeReport report =
        classify_regime(cfg.model, cfg.monitor.c_reg, cfg.monitor.epsilon);
    std::cout << report_to_kv(report);
    return 0;
}

int cmd_constants(const RunConfig& cfg) {
    const RegimeReport r =
        classify_regime(cfg.model, cfg.monitor.c_reg, cfg.monitor.epsilon);
    std::cout.precision(15);
    std::cout << "p_bar = " << r.p_bar << '\n'
              << "A = " << r.A_const << '\n'
              << "Xi = " << r.xi_const << '\n'
              << "gamma0_threshold = " << r.gamma0_threshold << '\n'
              << "bracket = " << r.bracket_value << " (epsilon = " << r.epsilon << ")\n";
    if (!(cfg.monitor.c_reg < r.A_const))
        std::cout << "no admissible (gamma0, gamma1): C >= A\n";
    return 0;
}

int cmd_sweep(SweepSpec spec, const std::string& out_override, int workers_override) {
    if (workers_override > 0) spec.workers = workers_override;
    if (!out_override.empty()) spec.base.output.dir = out_override;
    fs::create_directories(spec.base.output.dir);
    const SweepResult result = run_sweep(spec);
    const fs::path out(spec.base.output.dir);
    write_phase_csv(spec, result, (out / "phase.csv").string());
    std::cout << "wrote " << (out / "phase.csv").string() << " (" << result.rows.size()
              << " points)\n";
    return result.all_rows_present ? 0 : 1;
}

int cmd_estimate_creg(const RunConfig& cfg, const std::string& out_override,
                      double horizon, int samples, int steps, double rho_override,
                      double q_override) {
    const double p_bar =
        compute_p_bar(cfg.grid.dim, cfg.model.k, cfg.model.l, cfg.model.beta,
                      cfg.model.delta);
    const double rho = rho_override > 0.0 ? rho_override : cfg.model.delta;
    const double q = q_override > 0.0 ? q_override : (p_bar + cfg.model.l) / cfg.model.l;
    const RegularityEstimate est =
        estimate_c_rho(rho, q, cfg.make_grid(), horizon, samples,
                       (unsigned long long)cfg.seed, steps);
    std::cout << estimate_to_kv(est);
    if (!out_override.empty()) {
        fs::create_directories(out_override);
        const auto header = cfg.echo_lines();
        write_text((fs::path(out_override) / "estimate.txt").string(), header,
                   estimate_to_kv(est));
        write_text((fs::path(out_override) / "estimate.csv").string(), header,
                   estimate_csv_header() + "\n" + estimate_to_csv_row(est) + "\n");
    }
    const double A = compute_A(p_bar, cfg.model.l, cfg.model.delta);
    std::cout.precision(15);
    std::cout << "A = " << A << '\n';
    if (est.c_lower >= A)
        std::cout << "condition falsified at C = " << est.c_lower << " (C < A fails)\n";
    else
        std::cout << "not falsified: c_lower = " << est.c_lower << " < A\n";
    return 0;
}

int cmd_mms(const std::string& case_id) {
    const MmsReport rep = mms_convergence(case_id);
    std::cout << mms_report_to_kv(rep);
    std::cout << (rep.passed() ? "passed (order >= 1.7 for u, v, w)\n"
                               : "FAILED (order < 1.7)\n");
    return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attraction-repulsion chemotaxis laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long seed = -1;
    int workers = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "config file path");
        if (needs_config) opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "seed override");
    };

    auto* run = app.add_subcommand("run", "simulate one configuration");
    add_common(run, true);
    auto* classify = app.add_subcommand("classify", "classify the parameter point");
    add_common(classify, true);
    auto* constants = app.add_subcommand("constants", "print the analytic constants");
    add_common(constants, true);
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, true);
    sweep->add_option("--workers", workers, "worker threads (overrides sweep.workers)");

    auto* creg = app.add_subcommand("estimate-creg",
                                    "empirical lower bound for the regularity constant");
    add_common(creg, true);
    double est_horizon = 1.0, est_rho = 0.0, est_q = 0.0;
    int est_samples = 8, est_steps = 2048;
    creg->add_option("--horizon", est_horizon, "integration horizon");
    creg->add_option("--samples", est_samples, "number of sampled (psi0, h) pairs");
    creg->add_option("--steps", est_steps, "time steps");
    creg->add_option("--rho", est_rho, "decay rho (default: model delta)");
    creg->add_option("--q", est_q, "exponent q (default: (p_bar + l)/l)");

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    std::string mms_case = "cos2d";
    mms->add_option("--case", mms_case, "cos1d or cos2d");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mms->parsed()) return cmd_mms(mms_case);

        RunConfig cfg;
        SweepSpec spec;
        if (sweep->parsed()) {
            spec = load_sweep(config_path);
            if (seed >= 0) spec.base.seed = seed;
            return cmd_sweep(spec, out_dir, workers);
        }
        cfg = load_config(config_path);
        if (seed >= 0) cfg.seed = seed;
        if (run->parsed()) return cmd_run(cfg, out_dir);
        if (classify->parsed()) return cmd_classify(cfg);
        if (constants->parsed()) return cmd_constants(cfg);
        if (creg->parsed())
            return cmd_estimate_creg(cfg, out_dir, est_horizon, est_samples, est_steps,
                                     est_rho, est_q);
    } catch (const std::exception& e) {
        std::cerr << "arks: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
