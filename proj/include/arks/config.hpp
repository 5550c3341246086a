#ifndef ARKS_CONFIG_HPP_
#define ARKS_CONFIG_HPP_

#include <string>
#include <vector>

#include "arks/grid.hpp"
#include "arks/model.hpp"
#include "arks/stepper.hpp"

namespace arks {

inline constexpr const char* kArtifactVersion = "arks 0.1.0";

enum class InitKind { Homogeneous, Gaussian, File };
enum class ChemInit { QuasiSteady, Zero };

struct InitSpec {
    InitKind kind = InitKind::Homogeneous;
    double value = 1.0;  // homogeneous level
    double center_x = -1.0, center_y = -1.0;  // < 0 resolves to the domain center
    double width = 0.1;
    double amplitude = 1.0;
    double background = 0.0;
    double normalize_mass = 0.0;  // > 0 rescales u0 to this exact mass
    std::string file;
    ChemInit v_init = ChemInit::QuasiSteady;
    ChemInit w_init = ChemInit::QuasiSteady;
};

struct GridSpec {
    int dim = 0;  // mandatory
    int cells_x = 0, cells_y = 0;
    double extent_x = 0.0, extent_y = 0.0;
    FaceScheme face_scheme = FaceScheme::ArithmeticMean;
};

struct TimeSpec {
    double horizon = 10.0;
    double dt_min = 1e-10;
    double dt_max = 0.1;
    double cfl_safety = 0.4;
};

struct MonitorSpec {
    bool p_is_pbar = true;  // "pbar" resolves through the criteria module
    double p = 0.0;
    bool threshold_auto = true;  // 1e6 * (linf(u0) + 1)
    double blowup_threshold = 0.0;
    int sample_stride = 10;
    double c_reg = 0.1;     // maximal-regularity constant fed to the classifier
    double epsilon = 1e-6;  // default slack for the bracket check
};

struct OutputSpec {
    std::string dir = "out";
    int snapshot_every = 0;  // every N recorded samples; 0 disables
};

struct RunConfig {
    ModelParams model;      // dim is filled from grid.dim
    double gamma_g = -1.0;  // < 0 resolves to (gamma0 + gamma1)/2
    GridSpec grid;
    InitSpec init;
    TimeSpec time;
    MonitorSpec monitor;
    OutputSpec output;
    long seed = 0;

    Grid make_grid() const;
    // Builds (u0, v0, w0); v/w start at zero or at the pointwise
    // quasi-steady levels f(u0)/beta and g(u0)/delta.
    SimState make_initial_state() const;
    double resolve_monitor_p() const;
    double resolve_gamma_g() const;
    // Fully resolved `key = value` lines echoed into output headers.
    std::vector<std::string> echo_lines() const;
};

struct SweepAxis {
    std::string name;  // numeric ModelParams field
    double min = 0.0, max = 0.0;
    int count = 0;
    bool log_spacing = false;
};

struct SweepSpec {
    RunConfig base;
    std::vector<SweepAxis> axes;  // 1 or 2
    int workers = 1;
};

// Line-oriented grammar: `section.key = value`, `#` comments, `seed` is
// the only bare key. Unknown keys and duplicate keys are errors.
RunConfig parse_config(const std::string& text);
SweepSpec parse_sweep(const std::string& text);

RunConfig load_config(const std::string& path);
SweepSpec load_sweep(const std::string& path);

}  // namespace arks

#endif  // ARKS_CONFIG_HPP_
