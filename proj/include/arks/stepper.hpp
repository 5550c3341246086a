#ifndef ARKS_STEPPER_HPP_
#define ARKS_STEPPER_HPP_

#include <functional>
#include <string>
#include <vector>

#include "arks/grid.hpp"
#include "arks/model.hpp"

namespace arks {

// The discrete triple (u, v, w) at one time instant.
struct SimState {
    ScalarField u, v, w;
    double t = 0.0;
    double dt = 0.0;
};

struct NormRow {
    double t, mass, lp, linf_u, linf_v, linf_w, dt;
};

// Time series of the monitored quantities; `mass` must stay constant to
// 1e-8 relative over any bounded run.
struct NormSeries {
    double monitor_p = 2.0;
    std::vector<NormRow> rows;
};

enum class VerdictKind { BoundedRun, BlowupSuspected, StepCollapse, HorizonReached };

const char* verdict_name(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::HorizonReached;
    double t_end = 0.0;
    double sup_lp = 0.0;
    double sup_linf = 0.0;
};

// Hooks for tests and manufactured-solution runs. Null members select the
// canonical production laws / no extra sources.
struct StepExtras {
    std::function<double(double)> f;  // overrides alpha*s^k
    std::function<double(double)> g;  // overrides gamma_g*(1+s)^l
    std::function<double(double, double, double)> source_u;  // (x, y, t)
    std::function<double(double, double, double)> source_v;
    std::function<double(double, double, double)> source_w;
    FaceScheme face_scheme = FaceScheme::ArithmeticMean;
    double gamma_g = -1.0;  // <0 selects the envelope midpoint
};

// One IMEX step of size state.dt: explicit taxis (and sources) on u,
// implicit diffusion on all three fields, implicit decay on v and w,
// explicit production evaluated at the old u. Undershoots of u below
// -1e-12 throw StepRejected; values in [-1e-12, 0) are clipped to zero
// and the clipped mass is accumulated into *clipped_mass.
SimState step(const SimState& state, const ModelParams& params,
              const StepExtras& extras = {}, double* clipped_mass = nullptr);

// cfl * min( h^2/(2 dim), h / max_face(chi|grad v| + xi|grad w|) ),
// clamped to [dt_min, dt_max].
double adapt_dt(const SimState& state, const ModelParams& params,
                double cfl_safety = 0.4, double dt_min = 1e-10, double dt_max = 0.1);

struct RunOptions {
    double dt_min = 1e-10;
    double dt_max = 0.1;
    double cfl_safety = 0.4;
    int sample_stride = 10;
    StepExtras extras;
    // Called on every recorded sample (snapshot writers hook in here).
    std::function<void(int, const SimState&)> on_sample;
};

struct RunResult {
    NormSeries series;
    Verdict verdict;
    SimState final_state;
    double clipped_mass = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;
    // Nonnegativity monitor: smallest cell value seen at any sample.
    double min_u = 0.0, min_v = 0.0, min_w = 0.0;
};

// Advances from `init` until the horizon, a blow-up trigger
// (linf_u >= blowup_threshold), or 100 consecutive rejections at dt_min.
// HorizonReached upgrades to BoundedRun when the monitored integral of
// u^p has plateaued (sup over the last half within 5% of its value at
// the three-quarter mark).
RunResult run_simulation(const ModelParams& params, const SimState& init,
                         double horizon, double monitor_p, double blowup_threshold,
                         const RunOptions& opts = {});

// Fit of the a-priori envelope shape: y(t) = e^t * int u^p is fitted
// affinely in z = int_0^t e^s ds over the first tenth of the samples,
// and max_ratio is the largest y / (a + c z) over the whole run. A run
// consistent with the Gronwall-type bound keeps max_ratio below a small
// factor (the monitors use 10).
struct GronwallFit {
    double intercept = 0.0;  // a
    double slope = 0.0;      // c
    double max_ratio = 0.0;
    bool valid = false;
};

GronwallFit gronwall_envelope(const NormSeries& series);

void write_norms_csv(const NormSeries& series, const std::string& path,
                     const std::vector<std::string>& header = {});

std::string verdict_to_line(const Verdict& v);

}  // namespace arks

#endif  // ARKS_STEPPER_HPP_
