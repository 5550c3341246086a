#include "arks/stepper.hpp"

#include "arks/fastmath.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace arks {

namespace {

constexpr double kUndershootTol = 1e-12;

void check_shared_grid(const SimState& s) {
    if (s.u.grid != s.v.grid || s.u.grid != s.w.grid) throw GridMismatch();
}

void add_source(ScalarField& rhs, const std::function<double(double, double, double)>& src,
                double dt, double t) {
    if (!src) return;
    const Grid& g = rhs.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            rhs.at(ix, iy) += dt * src(g.x_center(ix), g.y_center(iy), t);
}

}  // namespace

const char* verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::BoundedRun: return "BoundedRun";
        case VerdictKind::BlowupSuspected: return "BlowupSuspected";
        case VerdictKind::StepCollapse: return "StepCollapse";
        case VerdictKind::HorizonReached: return "HorizonReached";
    }
    return "HorizonReached";
}

SimState step(const SimState& state, const ModelParams& params,
              const StepExtras& extras, double* clipped_mass) {
    check_shared_grid(state);
    const double dt = state.dt;
    if (!(dt > 0.0)) throw DomainError("step requires state.dt > 0");

    const Grid& g = state.u.grid;
    const std::size_t n = g.cell_count();

    struct Workspace {
        ScalarField drift_v, drift_w, rhs;
        std::vector<double> prod;
    };
    static thread_local Workspace ws;
    if (ws.rhs.grid != g) {
        ws.drift_v = ScalarField(g);
        ws.drift_w = ScalarField(g);
        ws.rhs = ScalarField(g);
        ws.prod.assign(n, 0.0);
    }

    // u: explicit taxis, then implicit diffusion without decay.
    taxis_divergence_into(state.u, state.v, -params.chi, extras.face_scheme, ws.drift_v);
    taxis_divergence_into(state.u, state.w, params.xi, extras.face_scheme, ws.drift_w);
    for (std::size_t i = 0; i < n; ++i)
        ws.rhs.values[i] =
            state.u.values[i] + dt * (ws.drift_v.values[i] + ws.drift_w.values[i]);
    add_source(ws.rhs, extras.source_u, dt, state.t);

    SimState next;
    next.u = solve_implicit_diffusion(ws.rhs, dt, 0.0);
    next.t = state.t + dt;
    next.dt = dt;

    double worst = 0.0;
    for (double v : next.u.values) worst = std::min(worst, v);
    if (worst < -kUndershootTol) throw StepRejected(worst);
    if (worst < 0.0) {
        double clipped = 0.0;
        for (double& v : next.u.values) {
            if (v < 0.0) {
                clipped -= v;
                v = 0.0;
            }
        }
        if (clipped_mass) *clipped_mass += clipped * g.cell_volume();
    }

    // v and w: explicit production at the old u, implicit diffusion+decay.
    if (extras.f) {
        for (std::size_t i = 0; i < n; ++i)
            ws.rhs.values[i] = state.v.values[i] + dt * extras.f(state.u.values[i]);
    } else {
        batch_pow(state.u.values.data(), ws.prod.data(), n, params.alpha, params.k);
        for (std::size_t i = 0; i < n; ++i)
            ws.rhs.values[i] = state.v.values[i] + dt * ws.prod[i];
    }
    add_source(ws.rhs, extras.source_v, dt, next.t);
    next.v = solve_implicit_diffusion(ws.rhs, dt, params.beta);

    if (extras.g) {
        for (std::size_t i = 0; i < n; ++i)
            ws.rhs.values[i] = state.w.values[i] + dt * extras.g(state.u.values[i]);
    } else {
        const double gg = extras.gamma_g >= 0.0 ? extras.gamma_g
                                                : 0.5 * (params.gamma0 + params.gamma1);
        batch_pow1p(state.u.values.data(), ws.prod.data(), n, gg, params.l);
        for (std::size_t i = 0; i < n; ++i)
            ws.rhs.values[i] = state.w.values[i] + dt * ws.prod[i];
    }
    add_source(ws.rhs, extras.source_w, dt, next.t);
    next.w = solve_implicit_diffusion(ws.rhs, dt, params.delta);

    return next;
}

double adapt_dt(const SimState& state, const ModelParams& params,
                double cfl_safety, double dt_min, double dt_max) {
    check_shared_grid(state);
    const Grid& g = state.u.grid;
    const double h = g.min_spacing();
    const double diffusive = h * h / (2.0 * g.dim);

    // Largest face-normal drift speed chi|grad v| + xi|grad w|.
    double speed = 0.0;
    const double* v = state.v.values.data();
    const double* w = state.w.values.data();
    const int nx = g.nx, ny = g.ny;
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t off = std::size_t(iy) * nx;
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const double s = params.chi * std::abs(v[off + ix + 1] - v[off + ix]) +
                             params.xi * std::abs(w[off + ix + 1] - w[off + ix]);
            speed = std::max(speed, s / g.hx);
        }
    }
    if (g.dim == 2) {
        for (int iy = 0; iy + 1 < ny; ++iy) {
            const std::size_t off = std::size_t(iy) * nx;
            for (int ix = 0; ix < nx; ++ix) {
                const double s = params.chi * std::abs(v[off + nx + ix] - v[off + ix]) +
                                 params.xi * std::abs(w[off + nx + ix] - w[off + ix]);
                speed = std::max(speed, s / g.hy);
            }
        }
    }
    constexpr double kTiny = 1e-30;
    const double advective = h / (speed + kTiny);
    const double dt = cfl_safety * std::min(diffusive, advective);
    return std::clamp(dt, dt_min, dt_max);
}

namespace {

NormRow sample_row(const SimState& s, double monitor_p) {
    NormRow r;
    r.t = s.t;
    r.mass = integral(s.u);
    r.lp = lp_integral(s.u, monitor_p);
    r.linf_u = linf_norm(s.u);
    r.linf_v = linf_norm(s.v);
    r.linf_w = linf_norm(s.w);
    r.dt = s.dt;
    return r;
}

}  // namespace

RunResult run_simulation(const ModelParams& params, const SimState& init,
                         double horizon, double monitor_p, double blowup_threshold,
                         const RunOptions& opts) {
    check_shared_grid(init);
    if (!(horizon > init.t)) throw DomainError("horizon must exceed the initial time");
    if (!(monitor_p > 0.5 * params.dim))
        std::fprintf(stderr,
                     "arks: warning: monitor p=%g does not exceed n/2=%g; "
                     "the boundedness criterion needs p > n/2\n",
                     monitor_p, 0.5 * params.dim);
    for (const ScalarField* f : {&init.u, &init.v, &init.w})
        for (double v : f->values)
            if (v < -kUndershootTol) throw NegativeValue("negative initial data");

    RunResult res;
    res.series.monitor_p = monitor_p;

    SimState state = init;
    state.dt = adapt_dt(state, params, opts.cfl_safety, opts.dt_min, opts.dt_max);

    int sample_index = 0;
    auto record = [&](const SimState& s) {
        if (!res.series.rows.empty() && !(s.t > res.series.rows.back().t)) return;
        res.series.rows.push_back(sample_row(s, monitor_p));
        const auto track_min = [](const ScalarField& f, double& lo) {
            for (double v : f.values) lo = std::min(lo, v);
        };
        track_min(s.u, res.min_u);
        track_min(s.v, res.min_v);
        track_min(s.w, res.min_w);
        if (opts.on_sample) opts.on_sample(sample_index, s);
        ++sample_index;
    };
    record(state);

    bool done = false;
    int consecutive_rejects_at_min = 0;
    long steps_since_sample = 0;
    while (!done) {
        if (state.t >= horizon) break;
        double dt = adapt_dt(state, params, opts.cfl_safety, opts.dt_min, opts.dt_max);
        if (state.t + dt > horizon) dt = horizon - state.t;
        if (!(dt > 0.0) || !(state.t + dt > state.t)) break;

        for (;;) {
            state.dt = dt;
            try {
                SimState next = step(state, params, opts.extras, &res.clipped_mass);
                state = std::move(next);
                ++res.accepted_steps;
                consecutive_rejects_at_min = 0;
                break;
            } catch (const StepRejected&) {
                ++res.rejected_steps;
                if (dt <= opts.dt_min * (1.0 + 1e-12)) {
                    if (++consecutive_rejects_at_min >= 100) {
                        res.verdict.kind = VerdictKind::StepCollapse;
                        done = true;
                        break;
                    }
                } else {
                    dt = std::max(0.5 * dt, opts.dt_min);
                }
            }
        }
        if (done) break;

        if (++steps_since_sample >= opts.sample_stride || state.t >= horizon) {
            record(state);
            steps_since_sample = 0;
        }
        if (linf_norm(state.u) >= blowup_threshold) {
            record(state);
            res.verdict.kind = VerdictKind::BlowupSuspected;
            done = true;
        }
    }

    record(state);  // final state (no-op when already recorded)
    res.final_state = std::move(state);

    double sup_lp = 0.0, sup_linf = 0.0;
    for (const NormRow& r : res.series.rows) {
        sup_lp = std::max(sup_lp, r.lp);
        sup_linf = std::max(sup_linf, r.linf_u);
    }
    res.verdict.t_end = res.final_state.t;
    res.verdict.sup_lp = sup_lp;
    res.verdict.sup_linf = sup_linf;

    if (res.verdict.kind != VerdictKind::StepCollapse &&
        res.verdict.kind != VerdictKind::BlowupSuspected) {
        res.verdict.kind = VerdictKind::HorizonReached;
        if (res.final_state.t >= horizon) {
            // Plateau heuristic: sup over the last half versus the value
            // at the three-quarter mark.
            const double t_half = init.t + 0.5 * (horizon - init.t);
            const double t_3q = init.t + 0.75 * (horizon - init.t);
            double sup_half = 0.0;
            const NormRow* nearest = nullptr;
            for (const NormRow& r : res.series.rows) {
                if (r.t >= t_half) sup_half = std::max(sup_half, r.lp);
                if (!nearest || std::abs(r.t - t_3q) < std::abs(nearest->t - t_3q))
                    nearest = &r;
            }
            if (nearest) {
                const double ref = nearest->lp;
                const bool plateau =
                    ref > 0.0 ? (sup_half - ref) <= 0.05 * ref : sup_half == 0.0;
                if (plateau) res.verdict.kind = VerdictKind::BoundedRun;
            }
        }
    }
    return res;
}

GronwallFit gronwall_envelope(const NormSeries& series) {
    GronwallFit fit;
    const auto& rows = series.rows;
    if (rows.size() < 4) return fit;
    if (!(rows.front().lp > 0.0)) return fit;

    // Affine least squares y = a + c z over the first tenth of the run.
    const std::size_t head = std::max<std::size_t>(3, rows.size() / 10);
    double sz = 0.0, sy = 0.0, szz = 0.0, szy = 0.0;
    for (std::size_t i = 0; i < head && i < rows.size(); ++i) {
        const double z = std::expm1(rows[i].t);
        const double y = std::exp(rows[i].t) * rows[i].lp;
        sz += z;
        sy += y;
        szz += z * z;
        szy += z * y;
    }
    const double m = double(std::min<std::size_t>(head, rows.size()));
    const double den = m * szz - sz * sz;
    if (den == 0.0) return fit;
    fit.slope = (m * szy - sz * sy) / den;
    fit.intercept = (sy - fit.slope * sz) / m;

    fit.max_ratio = 0.0;
    for (const NormRow& r : rows) {
        const double y = std::exp(r.t) * r.lp;
        const double envelope = fit.intercept + fit.slope * std::expm1(r.t);
        if (envelope <= 0.0) {
            if (y > 0.0) fit.max_ratio = std::numeric_limits<double>::infinity();
            continue;
        }
        fit.max_ratio = std::max(fit.max_ratio, y / envelope);
    }
    fit.valid = true;
    return fit;
}

void write_norms_csv(const NormSeries& series, const std::string& path,
                     const std::vector<std::string>& header) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header) os << "# " << line << '\n';
    os.precision(15);
    os << "t,mass,lp,linf_u,linf_v,linf_w,dt\n";
    for (const NormRow& r : series.rows)
        os << r.t << ',' << r.mass << ',' << r.lp << ',' << r.linf_u << ','
           << r.linf_v << ',' << r.linf_w << ',' << r.dt << '\n';
}

std::string verdict_to_line(const Verdict& v) {
    std::ostringstream os;
    os.precision(15);
    os << "verdict=" << verdict_name(v.kind) << " t_end=" << v.t_end
       << " sup_lp=" << v.sup_lp << " sup_linf=" << v.sup_linf;
    return os.str();
}

}  // namespace arks
