#include "arks/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "arks/criteria.hpp"

namespace arks {

namespace {

struct RawEntry {
    std::string value;
    int line;
};

// key -> (value, line); duplicate keys are grammar errors.
std::map<std::string, RawEntry> tokenize(const std::string& text) {
    std::map<std::string, RawEntry> entries;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw SyntaxError(lineno, "expected `key = value`");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw SyntaxError(lineno, "empty key");
        const auto dot = key.find('.');
        if (dot != std::string::npos && key.find('.', dot + 1) != std::string::npos)
            throw SyntaxError(lineno, "no nesting beyond one dot");
        if (dot == std::string::npos && key != "seed")
            throw SyntaxError(lineno, "only `seed` may appear without a section");
        const auto [it, inserted] = entries.emplace(key, RawEntry{value, lineno});
        if (!inserted)
            throw SyntaxError(lineno, "duplicate key '" + key + "' (first on line " +
                                          std::to_string(it->second.line) + ")");
    }
    return entries;
}

double parse_real(const std::string& key, const RawEntry& e) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &used);
    } catch (const std::exception&) {
        throw SyntaxError(e.line, "cannot parse number for " + key);
    }
    if (used != e.value.size()) throw SyntaxError(e.line, "trailing junk after " + key);
    return v;
}

long parse_int(const std::string& key, const RawEntry& e) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(e.value, &used);
    } catch (const std::exception&) {
        throw SyntaxError(e.line, "cannot parse integer for " + key);
    }
    if (used != e.value.size()) throw SyntaxError(e.line, "trailing junk after " + key);
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return parts;
}

class ConfigReader {
  public:
    explicit ConfigReader(const std::string& text) : entries_(tokenize(text)) {}

    double real(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.push_back(key);
        return parse_real(key, it->second);
    }
    double required_real(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ValidationError("missing mandatory key " + key);
        consumed_.push_back(key);
        return parse_real(key, it->second);
    }
    long integer(const std::string& key, long fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.push_back(key);
        return parse_int(key, it->second);
    }
    std::string text(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.push_back(key);
        return it->second.value;
    }
    const RawEntry* raw(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        consumed_.push_back(key);
        return &it->second;
    }

    // Every key in the file must have been consumed by a known reader.
    void finish() const {
        for (const auto& [key, entry] : entries_)
            if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
                throw UnknownKey(entry.line, key);
    }

  private:
    std::map<std::string, RawEntry> entries_;
    mutable std::vector<std::string> consumed_;
};

void read_run_config(ConfigReader& r, RunConfig& cfg) {
    cfg.model.chi = r.required_real("model.chi");
    cfg.model.xi = r.required_real("model.xi");
    cfg.model.beta = r.required_real("model.beta");
    cfg.model.delta = r.required_real("model.delta");
    cfg.model.alpha = r.required_real("model.alpha");
    cfg.model.gamma0 = r.required_real("model.gamma0");
    cfg.model.gamma1 = r.required_real("model.gamma1");
    cfg.model.k = r.required_real("model.k");
    cfg.model.l = r.required_real("model.l");
    cfg.gamma_g = r.real("model.gamma_g", -1.0);

    if (const RawEntry* e = r.raw("grid.dim")) {
        cfg.grid.dim = int(parse_int("grid.dim", *e));
        if (cfg.grid.dim != 1 && cfg.grid.dim != 2)
            throw ValidationError("grid.dim must be 1 or 2");
    } else {
        throw ValidationError("missing mandatory key grid.dim");
    }
    const RawEntry* cells = r.raw("grid.cells");
    if (!cells) throw ValidationError("missing mandatory key grid.cells");
    {
        const auto parts = split_list(cells->value);
        if (parts.empty() || parts.size() > 2)
            throw SyntaxError(cells->line, "grid.cells takes 1 or 2 values");
        cfg.grid.cells_x = int(parse_int("grid.cells", {parts[0], cells->line}));
        cfg.grid.cells_y =
            parts.size() == 2 ? int(parse_int("grid.cells", {parts[1], cells->line}))
                              : cfg.grid.cells_x;
    }
    const RawEntry* extent = r.raw("grid.extent");
    if (!extent) throw ValidationError("missing mandatory key grid.extent");
    {
        const auto parts = split_list(extent->value);
        if (parts.empty() || parts.size() > 2)
            throw SyntaxError(extent->line, "grid.extent takes 1 or 2 values");
        cfg.grid.extent_x = parse_real("grid.extent", {parts[0], extent->line});
        cfg.grid.extent_y =
            parts.size() == 2 ? parse_real("grid.extent", {parts[1], extent->line})
                              : cfg.grid.extent_x;
    }
    {
        const std::string s = r.text("grid.face_scheme", "mean");
        if (s == "mean")
            cfg.grid.face_scheme = FaceScheme::ArithmeticMean;
        else if (s == "upwind")
            cfg.grid.face_scheme = FaceScheme::Upwind;
        else
            throw ValidationError("grid.face_scheme must be mean or upwind");
    }
    cfg.model.dim = cfg.grid.dim;
    validate_params(cfg.model);
    if (cfg.gamma_g >= 0.0 &&
        (cfg.gamma_g < cfg.model.gamma0 || cfg.gamma_g > cfg.model.gamma1))
        throw ValidationError("model.gamma_g must lie in [gamma0, gamma1]");

    {
        const std::string kind = r.text("init.kind", "homogeneous");
        if (kind == "homogeneous")
            cfg.init.kind = InitKind::Homogeneous;
        else if (kind == "gaussian")
            cfg.init.kind = InitKind::Gaussian;
        else if (kind == "file")
            cfg.init.kind = InitKind::File;
        else
            throw ValidationError("init.kind must be homogeneous, gaussian or file");
    }
    cfg.init.value = r.real("init.value", cfg.init.value);
    if (const RawEntry* e = r.raw("init.center")) {
        const auto parts = split_list(e->value);
        if (parts.empty() || parts.size() > 2)
            throw SyntaxError(e->line, "init.center takes 1 or 2 values");
        cfg.init.center_x = parse_real("init.center", {parts[0], e->line});
        cfg.init.center_y =
            parts.size() == 2 ? parse_real("init.center", {parts[1], e->line}) : -1.0;
    }
    cfg.init.width = r.real("init.width", cfg.init.width);
    cfg.init.amplitude = r.real("init.amplitude", cfg.init.amplitude);
    cfg.init.background = r.real("init.background", cfg.init.background);
    cfg.init.normalize_mass = r.real("init.normalize_mass", cfg.init.normalize_mass);
    cfg.init.file = r.text("init.file", "");
    const auto chem_init = [&](const char* key, ChemInit fallback) {
        const std::string s = r.text(key, fallback == ChemInit::QuasiSteady
                                              ? "quasisteady"
                                              : "zero");
        if (s == "quasisteady") return ChemInit::QuasiSteady;
        if (s == "zero") return ChemInit::Zero;
        throw ValidationError(std::string(key) + " must be quasisteady or zero");
    };
    cfg.init.v_init = chem_init("init.v", cfg.init.v_init);
    cfg.init.w_init = chem_init("init.w", cfg.init.w_init);
    if (cfg.init.kind == InitKind::File && cfg.init.file.empty())
        throw ValidationError("init.kind = file requires init.file");
    if (cfg.init.kind == InitKind::Gaussian && !(cfg.init.width > 0.0))
        throw ValidationError("init.width must be > 0");

    cfg.time.horizon = r.real("time.horizon", cfg.time.horizon);
    cfg.time.dt_min = r.real("time.dt_min", cfg.time.dt_min);
    cfg.time.dt_max = r.real("time.dt_max", cfg.time.dt_max);
    cfg.time.cfl_safety = r.real("time.cfl_safety", cfg.time.cfl_safety);
    if (!(cfg.time.horizon > 0.0)) throw ValidationError("time.horizon must be > 0");
    if (!(cfg.time.dt_min > 0.0) || !(cfg.time.dt_max >= cfg.time.dt_min))
        throw ValidationError("need 0 < time.dt_min <= time.dt_max");
    if (!(cfg.time.cfl_safety > 0.0))
        throw ValidationError("time.cfl_safety must be > 0");

    if (const RawEntry* e = r.raw("monitor.p")) {
        if (e->value == "pbar") {
            cfg.monitor.p_is_pbar = true;
        } else {
            cfg.monitor.p_is_pbar = false;
            cfg.monitor.p = parse_real("monitor.p", *e);
            if (!(cfg.monitor.p >= 1.0))
                throw ValidationError("monitor.p must be >= 1");
        }
    }
    if (const RawEntry* e = r.raw("monitor.blowup_threshold")) {
        if (e->value == "auto") {
            cfg.monitor.threshold_auto = true;
        } else {
            cfg.monitor.threshold_auto = false;
            cfg.monitor.blowup_threshold = parse_real("monitor.blowup_threshold", *e);
            if (!(cfg.monitor.blowup_threshold > 0.0))
                throw ValidationError("monitor.blowup_threshold must be > 0");
        }
    }
    cfg.monitor.sample_stride = int(r.integer("monitor.sample_stride", cfg.monitor.sample_stride));
    if (cfg.monitor.sample_stride < 1)
        throw ValidationError("monitor.sample_stride must be >= 1");
    cfg.monitor.c_reg = r.real("monitor.c_reg", cfg.monitor.c_reg);
    if (!(cfg.monitor.c_reg > 0.0)) throw ValidationError("monitor.c_reg must be > 0");
    cfg.monitor.epsilon = r.real("monitor.epsilon", cfg.monitor.epsilon);
    if (!(cfg.monitor.epsilon > 0.0)) throw ValidationError("monitor.epsilon must be > 0");

    cfg.output.dir = r.text("output.dir", cfg.output.dir);
    cfg.output.snapshot_every = int(r.integer("output.snapshot_every", 0));
    if (cfg.output.snapshot_every < 0)
        throw ValidationError("output.snapshot_every must be >= 0");

    cfg.seed = r.integer("seed", 0);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    ConfigReader r(text);
    RunConfig cfg;
    read_run_config(r, cfg);
    r.finish();
    return cfg;
}

SweepSpec parse_sweep(const std::string& text) {
    ConfigReader r(text);
    SweepSpec spec;
    read_run_config(r, spec.base);

    static const char* kSweepable[] = {"chi", "xi", "beta", "delta", "alpha",
                                       "gamma0", "gamma1", "k", "l"};
    const auto read_axis = [&](const char* key) {
        const RawEntry* e = r.raw(key);
        if (!e) return;
        const auto parts = split_list(e->value);
        if (parts.size() != 4 && parts.size() != 5)
            throw SyntaxError(e->line,
                              std::string(key) + " takes name,min,max,count[,spacing]");
        SweepAxis ax;
        ax.name = parts[0];
        if (std::find_if(std::begin(kSweepable), std::end(kSweepable), [&](const char* n) {
                return ax.name == n;
            }) == std::end(kSweepable))
            throw ValidationError("sweep axis must name a numeric model parameter, got '" +
                                  ax.name + "'");
        ax.min = parse_real(key, {parts[1], e->line});
        ax.max = parse_real(key, {parts[2], e->line});
        ax.count = int(parse_int(key, {parts[3], e->line}));
        if (ax.count < 2) throw ValidationError("sweep axis count must be >= 2");
        if (parts.size() == 5) {
            if (parts[4] == "log")
                ax.log_spacing = true;
            else if (parts[4] != "linear")
                throw SyntaxError(e->line, "spacing must be linear or log");
        }
        if (ax.log_spacing && !(ax.min > 0.0))
            throw ValidationError("log-spaced axis needs min > 0");
        spec.axes.push_back(ax);
    };
    read_axis("sweep.axis1");
    read_axis("sweep.axis2");
    if (spec.axes.empty()) throw ValidationError("sweep needs at least sweep.axis1");
    spec.workers = int(r.integer("sweep.workers", 1));
    if (spec.workers < 1) throw ValidationError("sweep.workers must be >= 1");
    r.finish();
    return spec;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config file " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

RunConfig load_config(const std::string& path) { return parse_config(slurp(path)); }
SweepSpec load_sweep(const std::string& path) { return parse_sweep(slurp(path)); }

Grid RunConfig::make_grid() const {
    return grid.dim == 1 ? Grid::make_1d(grid.cells_x, grid.extent_x)
                         : Grid::make_2d(grid.cells_x, grid.cells_y, grid.extent_x,
                                         grid.extent_y);
}

double RunConfig::resolve_gamma_g() const {
    return gamma_g >= 0.0 ? gamma_g : 0.5 * (model.gamma0 + model.gamma1);
}

SimState RunConfig::make_initial_state() const {
    const Grid g = make_grid();
    SimState s;
    s.u = ScalarField(g);
    switch (init.kind) {
        case InitKind::Homogeneous:
            std::fill(s.u.values.begin(), s.u.values.end(), init.value);
            break;
        case InitKind::Gaussian: {
            const double cx = init.center_x >= 0.0 ? init.center_x : 0.5 * g.lx;
            const double cy = init.center_y >= 0.0 ? init.center_y : 0.5 * g.ly;
            const double inv2s2 = 1.0 / (2.0 * init.width * init.width);
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix) {
                    const double dx = g.x_center(ix) - cx;
                    const double dy = g.dim == 2 ? g.y_center(iy) - cy : 0.0;
                    s.u.at(ix, iy) =
                        init.background +
                        init.amplitude * std::exp(-(dx * dx + dy * dy) * inv2s2);
                }
            break;
        }
        case InitKind::File:
            s.u = read_field_csv(g, init.file);
            break;
    }
    for (double v : s.u.values)
        if (v < 0.0) throw NegativeValue("initial u has negative cells");
    if (init.normalize_mass > 0.0) {
        const double m = integral(s.u);
        if (!(m > 0.0)) throw ValidationError("cannot normalize a zero-mass field");
        const double fac = init.normalize_mass / m;
        for (double& v : s.u.values) v *= fac;
    }

    const ProductionLaw f = attraction_law(model);
    const ProductionLaw gl = repulsion_law(model, resolve_gamma_g());
    s.v = ScalarField(g);
    s.w = ScalarField(g);
    if (init.v_init == ChemInit::QuasiSteady)
        for (std::size_t i = 0; i < s.u.values.size(); ++i)
            s.v.values[i] = eval_production(f, s.u.values[i]) / model.beta;
    if (init.w_init == ChemInit::QuasiSteady)
        for (std::size_t i = 0; i < s.u.values.size(); ++i)
            s.w.values[i] = eval_production(gl, s.u.values[i]) / model.delta;
    return s;
}

double RunConfig::resolve_monitor_p() const {
    if (!monitor.p_is_pbar) return monitor.p;
    return compute_p_bar(grid.dim, model.k, model.l, model.beta, model.delta);
}

std::vector<std::string> RunConfig::echo_lines() const {
    std::vector<std::string> lines;
    const auto emit = [&](const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    };
    const auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    lines.push_back(std::string(kArtifactVersion));
    emit("model.chi", num(model.chi));
    emit("model.xi", num(model.xi));
    emit("model.beta", num(model.beta));
    emit("model.delta", num(model.delta));
    emit("model.alpha", num(model.alpha));
    emit("model.gamma0", num(model.gamma0));
    emit("model.gamma1", num(model.gamma1));
    emit("model.gamma_g", num(resolve_gamma_g()));
    emit("model.k", num(model.k));
    emit("model.l", num(model.l));
    emit("grid.dim", std::to_string(grid.dim));
    emit("grid.cells", std::to_string(grid.cells_x) +
                           (grid.dim == 2 ? ", " + std::to_string(grid.cells_y) : ""));
    emit("grid.extent",
         num(grid.extent_x) + (grid.dim == 2 ? ", " + num(grid.extent_y) : ""));
    emit("grid.face_scheme",
         grid.face_scheme == FaceScheme::Upwind ? "upwind" : "mean");
    switch (init.kind) {
        case InitKind::Homogeneous:
            emit("init.kind", "homogeneous");
            emit("init.value", num(init.value));
            break;
        case InitKind::Gaussian:
            emit("init.kind", "gaussian");
            emit("init.center", num(init.center_x) + ", " + num(init.center_y));
            emit("init.width", num(init.width));
            emit("init.amplitude", num(init.amplitude));
            emit("init.background", num(init.background));
            if (init.normalize_mass > 0.0)
                emit("init.normalize_mass", num(init.normalize_mass));
            break;
        case InitKind::File:
            emit("init.kind", "file");
            emit("init.file", init.file);
            break;
    }
    emit("init.v", init.v_init == ChemInit::Zero ? "zero" : "quasisteady");
    emit("init.w", init.w_init == ChemInit::Zero ? "zero" : "quasisteady");
    emit("time.horizon", num(time.horizon));
    emit("time.dt_min", num(time.dt_min));
    emit("time.dt_max", num(time.dt_max));
    emit("time.cfl_safety", num(time.cfl_safety));
    emit("monitor.p", monitor.p_is_pbar ? "pbar (" + num(resolve_monitor_p()) + ")"
                                        : num(monitor.p));
    emit("monitor.blowup_threshold",
         monitor.threshold_auto ? "auto" : num(monitor.blowup_threshold));
    emit("monitor.sample_stride", std::to_string(monitor.sample_stride));
    emit("monitor.c_reg", num(monitor.c_reg));
    emit("monitor.epsilon", num(monitor.epsilon));
    emit("output.dir", output.dir);
    emit("output.snapshot_every", std::to_string(output.snapshot_every));
    emit("seed", std::to_string(seed));
    return lines;
}

}  // namespace arks
