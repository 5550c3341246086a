#include <cmath>
#include <random>

#include "arks/stepper.hpp"
#include "doctest.h"

using namespace arks;

namespace {

ModelParams regime_i_params() {
    ModelParams p;
    p.chi = p.xi = p.beta = p.delta = p.alpha = p.gamma0 = p.gamma1 = 1.0;
    p.k = p.l = 0.4;
    p.dim = 2;
    return p;
}

SimState equilibrium_state(const Grid& g, const ModelParams& p, double c) {
    SimState s;
    s.u = ScalarField(g, c);
    s.v = ScalarField(g, eval_production(attraction_law(p), c) / p.beta);
    s.w = ScalarField(g, eval_production(repulsion_law(p), c) / p.delta);
    return s;
}

SimState bump_state(const Grid& g, const ModelParams& p, double sigma = 0.1,
                    double amplitude = 4.0, double background = 0.1) {
    SimState s;
    s.u = ScalarField(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double dx = g.x_center(ix) - 0.5 * g.lx;
            const double dy = g.dim == 2 ? g.y_center(iy) - 0.5 * g.ly : 0.0;
            s.u.at(ix, iy) =
                background + amplitude * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
    s.v = ScalarField(g);
    s.w = ScalarField(g);
    const ProductionLaw f = attraction_law(p);
    const ProductionLaw gl = repulsion_law(p);
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        s.v.values[i] = eval_production(f, s.u.values[i]) / p.beta;
        s.w.values[i] = eval_production(gl, s.u.values[i]) / p.delta;
    }
    return s;
}

double rel_diff(const ScalarField& a, const ScalarField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num = std::max(num, std::abs(a.values[i] - b.values[i]));
        den = std::max(den, std::abs(b.values[i]));
    }
    return num / std::max(den, 1e-300);
}

}  // namespace

TEST_CASE("homogeneous steady state is a fixed point of one step") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(16, 16, 1.0, 1.0);
    SimState s = equilibrium_state(g, p, 1.3);
    s.dt = adapt_dt(s, p);
    const SimState next = step(s, p);
    CHECK(rel_diff(next.u, s.u) <= 1e-9);
    CHECK(rel_diff(next.v, s.v) <= 1e-9);
    CHECK(rel_diff(next.w, s.w) <= 1e-9);
}

TEST_CASE("with zero taxis and zero production u follows pure heat decay") {
    ModelParams p = regime_i_params();
    p.dim = 1;
    p.chi = 0.0;  // step() itself does not re-validate; the test wants the
    p.xi = 0.0;   // decoupled heat equation
    const Grid g = Grid::make_1d(32, 1.0);
    SimState s = bump_state(g, p);
    s.v = ScalarField(g);
    s.w = ScalarField(g);
    StepExtras extras;
    extras.f = [](double) { return 0.0; };
    extras.g = [](double) { return 0.0; };

    const double mass0 = integral(s.u);
    double spread0 = linf_norm(s.u) - *std::min_element(s.u.values.begin(), s.u.values.end());
    s.dt = 1e-3;
    for (int i = 0; i < 500; ++i) s = step(s, p, extras);

    CHECK(integral(s.u) == doctest::Approx(mass0).epsilon(1e-10));
    const double spread =
        linf_norm(s.u) - *std::min_element(s.u.values.begin(), s.u.values.end());
    CHECK(spread <= spread0 / 100.0);
    CHECK(linf_norm(s.v) == 0.0);
    CHECK(linf_norm(s.w) == 0.0);
}

TEST_CASE("one IMEX step agrees with a fully explicit reference at tiny dt") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    SimState s = bump_state(g, p, 0.15, 2.0, 0.3);
    const double dt = 1e-6;
    s.dt = dt;
    const SimState imex = step(s, p);

    // Explicit Euler oracle assembled from the public operators.
    const ScalarField lap_u = laplacian_neumann(s.u);
    const ScalarField lap_v = laplacian_neumann(s.v);
    const ScalarField lap_w = laplacian_neumann(s.w);
    const ScalarField dv = taxis_divergence(s.u, s.v, -p.chi);
    const ScalarField dw = taxis_divergence(s.u, s.w, p.xi);
    const ProductionLaw f = attraction_law(p);
    const ProductionLaw gl = repulsion_law(p);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        const double ue = s.u.values[i] + dt * (lap_u.values[i] + dv.values[i] + dw.values[i]);
        const double ve = s.v.values[i] +
                          dt * (lap_v.values[i] - p.beta * s.v.values[i] +
                                eval_production(f, s.u.values[i]));
        const double we = s.w.values[i] +
                          dt * (lap_w.values[i] - p.delta * s.w.values[i] +
                                eval_production(gl, s.u.values[i]));
        worst = std::max({worst, std::abs(imex.u.values[i] - ue),
                          std::abs(imex.v.values[i] - ve), std::abs(imex.w.values[i] - we)});
    }
    CHECK(worst <= 5e-6);  // O(dt) agreement at dt = 1e-6
}

TEST_CASE("adapt_dt follows the diffusive and advective bounds") {
    const ModelParams p = regime_i_params();
    const Grid g16 = Grid::make_2d(16, 16, 1.0, 1.0);
    SimState flat = equilibrium_state(g16, p, 1.0);
    const double h = g16.min_spacing();
    CHECK(adapt_dt(flat, p, 0.4, 1e-10, 0.1) ==
          doctest::Approx(0.4 * h * h / 4.0).epsilon(1e-14));
    CHECK(adapt_dt(flat, p, 0.4, 1e-10, 1e-6) == 1e-6);  // dt_max clamp

    // Enormous gradients pin the step at dt_min.
    SimState steep = flat;
    for (int ix = 0; ix < g16.nx; ++ix)
        for (int iy = 0; iy < g16.ny; ++iy) steep.v.at(ix, iy) = 1e12 * ix;
    CHECK(adapt_dt(steep, p, 0.4, 1e-10, 0.1) == 1e-10);

    // Doubling h quadruples the diffusive bound.
    const Grid g8 = Grid::make_2d(8, 8, 1.0, 1.0);
    SimState flat8 = equilibrium_state(g8, p, 1.0);
    CHECK(adapt_dt(flat8, p, 0.4, 1e-10, 1.0) /
              adapt_dt(flat, p, 0.4, 1e-10, 1.0) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("zero initial data: u stays zero, w rises toward gamma_g/delta") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    SimState s;
    s.u = ScalarField(g);
    s.v = ScalarField(g);
    s.w = ScalarField(g);
    RunOptions opts;
    opts.sample_stride = 5;
    const RunResult res = run_simulation(p, s, 1.0, 2.0, 1e6, opts);
    CHECK(res.verdict.kind == VerdictKind::BoundedRun);
    CHECK(linf_norm(res.final_state.u) == 0.0);
    const double target = 1.0 / p.delta;  // gamma_g = 1 here
    const double expected = target * (1.0 - std::exp(-p.delta * 1.0));
    for (double w : res.final_state.w.values)
        CHECK(w == doctest::Approx(expected).epsilon(1e-2));
    // w grows monotonically in the recorded series
    for (std::size_t i = 1; i < res.series.rows.size(); ++i)
        CHECK(res.series.rows[i].linf_w >= res.series.rows[i - 1].linf_w - 1e-12);
}

TEST_CASE("homogeneous run is a flat BoundedRun") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    const SimState s = equilibrium_state(g, p, 1.0);
    const RunResult res = run_simulation(p, s, 0.5, 2.0, 1e6);
    CHECK(res.verdict.kind == VerdictKind::BoundedRun);
    for (const NormRow& r : res.series.rows)
        CHECK(r.linf_u == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("norm series: increasing time, conserved mass, norm sandwich") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(32, 32, 1.0, 1.0);
    const SimState s = bump_state(g, p);
    const RunResult res = run_simulation(p, s, 0.25, 2.0, 1e6);
    REQUIRE(res.series.rows.size() >= 10);
    const double mass0 = res.series.rows.front().mass;
    const double volume = g.cell_volume();
    const double measure = g.measure();
    for (std::size_t i = 0; i < res.series.rows.size(); ++i) {
        const NormRow& r = res.series.rows[i];
        if (i > 0) CHECK(r.t > res.series.rows[i - 1].t);
        CHECK(std::abs(r.mass - mass0) <= 1e-8 * mass0);
        const double linf_p = std::pow(r.linf_u, res.series.monitor_p);
        CHECK(r.lp <= measure * linf_p * (1.0 + 1e-12));
        CHECK(linf_p * volume <= r.lp * (1.0 + 1e-12));
    }
    // all three fields stay nonnegative up to the round-off tolerance
    CHECK(res.min_u >= -1e-12);
    CHECK(res.min_v >= -1e-12);
    CHECK(res.min_w >= -1e-12);
}

TEST_CASE("forced large steps collapse instead of looping forever") {
    ModelParams p = regime_i_params();
    p.chi = 80.0;
    p.dim = 1;
    const Grid g = Grid::make_1d(32, 1.0);
    const SimState s = bump_state(g, p, 0.05, 6.0, 0.01);
    RunOptions opts;
    opts.dt_min = 0.02;
    opts.dt_max = 0.02;  // the rejection loop cannot shrink dt
    const RunResult res = run_simulation(p, s, 5.0, 2.0, 1e9, opts);
    CHECK(res.verdict.kind == VerdictKind::StepCollapse);
    CHECK(res.rejected_steps >= 100);
}

TEST_CASE("suspected blow-up shows monotone growth of linf over the last samples") {
    ModelParams p = regime_i_params();
    p.chi = 8.0;
    p.xi = 1e-6;
    p.gamma0 = p.gamma1 = 1e-6;  // effectively no repulsion
    p.k = 0.9;
    const Grid g = Grid::make_2d(24, 24, 1.0, 1.0);
    const SimState s = bump_state(g, p, 0.08, 6.0, 0.05);
    RunOptions opts;
    opts.sample_stride = 1;
    const double threshold = 1.2 * linf_norm(s.u);
    const RunResult res = run_simulation(p, s, 5.0, 2.0, threshold, opts);
    REQUIRE(res.verdict.kind == VerdictKind::BlowupSuspected);
    CHECK(res.verdict.sup_linf >= threshold);
    const auto& rows = res.series.rows;
    const std::size_t tail = std::min<std::size_t>(20, rows.size());
    for (std::size_t i = rows.size() - tail + 1; i < rows.size(); ++i)
        CHECK(rows[i].linf_u >= rows[i - 1].linf_u - 1e-12);
}

TEST_CASE("constant manufactured solution is reproduced exactly") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    SimState s;
    s.u = ScalarField(g, 2.0);
    s.v = ScalarField(g, 1.5);
    s.w = ScalarField(g, 1.2);
    // Sources freeze the constant state: S_v = beta*v - f(u), etc.
    const double fu = eval_production(attraction_law(p), 2.0);
    const double gu = eval_production(repulsion_law(p), 2.0);
    StepExtras extras;
    extras.source_v = [&, fu](double, double, double) { return p.beta * 1.5 - fu; };
    extras.source_w = [&, gu](double, double, double) { return p.delta * 1.2 - gu; };
    s.dt = 1e-3;
    for (int i = 0; i < 100; ++i) s = step(s, p, extras);
    CHECK(rel_diff(s.u, ScalarField(g, 2.0)) <= 1e-12);
    CHECK(rel_diff(s.v, ScalarField(g, 1.5)) <= 1e-12);
    CHECK(rel_diff(s.w, ScalarField(g, 1.2)) <= 1e-12);
}

TEST_CASE("gronwall envelope bounds a settling long run within the factor") {
    // The envelope fit needs the fit window (first tenth) to reach past
    // the initial transient, as in the evidence-run setting: long horizon.
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    const SimState s = bump_state(g, p, 0.15, 3.0, 0.2);
    const RunResult res = run_simulation(p, s, 20.0, 2.0, 1e6);
    REQUIRE(res.verdict.kind == VerdictKind::BoundedRun);
    const GronwallFit fit = gronwall_envelope(res.series);
    REQUIRE(fit.valid);
    CHECK(fit.slope > 0.0);  // the late run grows like slope * e^t
    CHECK(fit.max_ratio <= 10.0);
}

TEST_CASE("upwind faces also conserve mass over a run") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(24, 24, 1.0, 1.0);
    const SimState s = bump_state(g, p, 0.08, 6.0, 0.05);
    RunOptions opts;
    opts.extras.face_scheme = FaceScheme::Upwind;
    const RunResult res = run_simulation(p, s, 0.2, 2.0, 1e9, opts);
    const double mass0 = res.series.rows.front().mass;
    for (const NormRow& r : res.series.rows)
        CHECK(std::abs(r.mass - mass0) <= 1e-8 * mass0);
    CHECK(res.final_state.t == doctest::Approx(0.2));
}

TEST_CASE("negative initial data is rejected") {
    const ModelParams p = regime_i_params();
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    SimState s;
    s.u = ScalarField(g, -1.0);
    s.v = ScalarField(g);
    s.w = ScalarField(g);
    CHECK_THROWS_AS(run_simulation(p, s, 1.0, 2.0, 1e6), NegativeValue);
}
