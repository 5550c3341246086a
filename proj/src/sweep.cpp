#include "arks/sweep.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "arks/criteria.hpp"

namespace arks {

namespace {

double axis_value(const SweepAxis& ax, int j) {
    const double t = double(j) / double(ax.count - 1);
    if (ax.log_spacing)
        return std::exp(std::log(ax.min) + t * (std::log(ax.max) - std::log(ax.min)));
    return ax.min + t * (ax.max - ax.min);
}

void apply_param(ModelParams& p, const std::string& name, double value) {
    if (name == "chi") p.chi = value;
    else if (name == "xi") p.xi = value;
    else if (name == "beta") p.beta = value;
    else if (name == "delta") p.delta = value;
    else if (name == "alpha") p.alpha = value;
    else if (name == "gamma0") p.gamma0 = value;
    else if (name == "gamma1") p.gamma1 = value;
    else if (name == "k") p.k = value;
    else if (name == "l") p.l = value;
    else throw ValidationError("unknown sweep parameter " + name);
}

SweepRow run_point(const SweepSpec& spec, const std::vector<double>& values) {
    SweepRow row;
    row.swept_values = values;
    try {
        RunConfig cfg = spec.base;
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
            apply_param(cfg.model, spec.axes[a].name, values[a]);
        // Sweeping gamma0/gamma1 can leave an explicit gamma_g outside the
        // envelope; fall back to the midpoint in that case.
        if (cfg.gamma_g >= 0.0 &&
            (cfg.gamma_g < cfg.model.gamma0 || cfg.gamma_g > cfg.model.gamma1))
            cfg.gamma_g = -1.0;
        validate_params(cfg.model);

        const RegimeReport report =
            classify_regime(cfg.model, cfg.monitor.c_reg, cfg.monitor.epsilon);
        row.regime = regime_name(report.regime);

        SimState init = cfg.make_initial_state();
        const double p = cfg.resolve_monitor_p();
        const double threshold = cfg.monitor.threshold_auto
                                     ? 1e6 * (linf_norm(init.u) + 1.0)
                                     : cfg.monitor.blowup_threshold;
        RunOptions opts;
        opts.dt_min = cfg.time.dt_min;
        opts.dt_max = cfg.time.dt_max;
        opts.cfl_safety = cfg.time.cfl_safety;
        opts.sample_stride = cfg.monitor.sample_stride;
        opts.extras.face_scheme = cfg.grid.face_scheme;
        opts.extras.gamma_g = cfg.resolve_gamma_g();

        const RunResult res =
            run_simulation(cfg.model, init, cfg.time.horizon, p, threshold, opts);
        row.verdict = verdict_name(res.verdict.kind);
        row.sup_linf = res.verdict.sup_linf;
        row.sup_lp = res.verdict.sup_lp;
    } catch (const std::exception& e) {
        row.verdict = "error";
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    SweepResult result;
    for (const SweepAxis& ax : spec.axes) result.axis_names.push_back(ax.name);

    std::vector<std::vector<double>> points;
    if (spec.axes.size() == 1) {
        for (int i = 0; i < spec.axes[0].count; ++i)
            points.push_back({axis_value(spec.axes[0], i)});
    } else {
        for (int j = 0; j < spec.axes[1].count; ++j)
            for (int i = 0; i < spec.axes[0].count; ++i)
                points.push_back({axis_value(spec.axes[0], i), axis_value(spec.axes[1], j)});
    }

    result.rows.resize(points.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(spec.workers, int(points.size())));
    auto work = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= points.size()) return;
            result.rows[idx] = run_point(spec, points[idx]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (const SweepRow& row : result.rows)
        if (row.verdict.empty()) result.all_rows_present = false;
    return result;
}

void write_phase_csv(const SweepSpec& spec, const SweepResult& result,
                     const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    for (const auto& line : spec.base.echo_lines()) os << "# " << line << '\n';
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const SweepAxis& ax = spec.axes[a];
        os << "# sweep.axis" << a + 1 << " = " << ax.name << ", " << ax.min << ", "
           << ax.max << ", " << ax.count << ", " << (ax.log_spacing ? "log" : "linear")
           << '\n';
    }
    for (const auto& name : result.axis_names) os << name << ',';
    os << "verdict,sup_linf,sup_lp,regime\n";
    os.precision(15);
    for (const SweepRow& row : result.rows) {
        for (double v : row.swept_values) os << v << ',';
        os << row.verdict << ',' << row.sup_linf << ',' << row.sup_lp << ','
           << row.regime;
        if (!row.error.empty()) {
            std::string msg = row.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << " (" << msg << ")";
        }
        os << '\n';
    }
}

}  // namespace arks
