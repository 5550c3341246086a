#include <cmath>
#include <filesystem>

#include "arks/config.hpp"
#include "doctest.h"

using namespace arks;

namespace {

const char* kMinimal = R"(
# minimal configuration
model.chi = 1
model.xi = 1
model.beta = 1
model.delta = 1
model.alpha = 1
model.gamma0 = 1
model.gamma1 = 1
model.k = 0.4
model.l = 0.4
grid.dim = 2
grid.cells = 16
grid.extent = 1.0
)";

std::string with_line(const std::string& extra) { return std::string(kMinimal) + extra + "\n"; }

}  // namespace

TEST_CASE("minimal config fills every documented default") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.grid.cells_y == 16);        // square when one count given
    CHECK(cfg.grid.extent_y == 1.0);
    CHECK(cfg.init.kind == InitKind::Homogeneous);
    CHECK(cfg.init.value == 1.0);
    CHECK(cfg.time.horizon == 10.0);
    CHECK(cfg.time.dt_max == 0.1);
    CHECK(cfg.time.cfl_safety == 0.4);
    CHECK(cfg.monitor.p_is_pbar);
    CHECK(cfg.monitor.threshold_auto);
    CHECK(cfg.monitor.sample_stride == 10);
    CHECK(cfg.monitor.c_reg == 0.1);
    CHECK(cfg.monitor.epsilon == 1e-6);
    CHECK(cfg.output.dir == "out");
    CHECK(cfg.seed == 0);
    CHECK(cfg.resolve_monitor_p() == doctest::Approx(2.0));  // p_bar at beta=delta=1
    CHECK(cfg.resolve_gamma_g() == doctest::Approx(1.0));
}

TEST_CASE("validation errors propagate from the model") {
    // Replace k with a negative value in a fresh config.
    std::string text(kMinimal);
    const auto pos = text.find("model.k = 0.4");
    text.replace(pos, std::string("model.k = 0.4").size(), "model.k = -1 ");
    try {
        parse_config(text);
        FAIL("expected NonPositiveCoefficient");
    } catch (const NonPositiveCoefficient& e) {
        CHECK(e.field == "k");
    }
}

TEST_CASE("duplicate keys raise a syntax error citing both lines") {
    try {
        parse_config(with_line("model.chi = 2"));
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(std::string(e.what()).find("duplicate key") != std::string::npos);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
        // message names the first occurrence too
        CHECK(std::string(e.what()).find("first on line") != std::string::npos);
    }
}

TEST_CASE("unknown keys are errors, not warnings") {
    try {
        parse_config(with_line("model.typo = 3"));
        FAIL("expected UnknownKey");
    } catch (const UnknownKey& e) {
        CHECK(e.key == "model.typo");
    }
    CHECK_THROWS_AS(parse_config(with_line("extra.section = 3")), UnknownKey);
}

TEST_CASE("grammar violations") {
    CHECK_THROWS_AS(parse_config(with_line("not a key value line")), SyntaxError);
    CHECK_THROWS_AS(parse_config(with_line("a.b.c = 1")), SyntaxError);
    CHECK_THROWS_AS(parse_config(with_line("bare = 1")), SyntaxError);
    CHECK_NOTHROW(parse_config(with_line("seed = 42")));
    CHECK_THROWS_AS(parse_config(with_line("model.chi2 = 1x")), UnknownKey);
    CHECK_THROWS_AS(parse_config(with_line("time.horizon = 1x")), SyntaxError);
}

TEST_CASE("missing mandatory keys are validation errors") {
    std::string text(kMinimal);
    const auto pos = text.find("grid.cells = 16\n");
    text.erase(pos, std::string("grid.cells = 16\n").size());
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("initial states from the config") {
    const RunConfig homog = parse_config(with_line("init.value = 1.3"));
    const SimState s = homog.make_initial_state();
    CHECK(s.u.values[0] == 1.3);
    // quasi-steady chemical fields: v = f(u)/beta
    CHECK(s.v.values[0] ==
          doctest::Approx(std::pow(1.3, homog.model.k) / homog.model.beta));

    const RunConfig gauss = parse_config(
        with_line("init.kind = gaussian\ninit.width = 0.1\ninit.normalize_mass = 1\n"
                  "init.v = zero\ninit.w = zero"));
    const SimState sg = gauss.make_initial_state();
    CHECK(integral(sg.u) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(linf_norm(sg.v) == 0.0);
    CHECK(linf_norm(sg.w) == 0.0);
}

TEST_CASE("initial data from a CSV field file") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "arks_cfg_file_init";
    fs::create_directories(dir);
    const RunConfig base = parse_config(kMinimal);
    ScalarField f(base.make_grid());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 0.5 + 0.001 * i;
    const std::string path = (dir / "u0.csv").string();
    write_field_csv(f, path, {"field"});

    const RunConfig cfg =
        parse_config(with_line("init.kind = file\ninit.file = " + path));
    const SimState s = cfg.make_initial_state();
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(s.u.values[i] == doctest::Approx(f.values[i]).epsilon(1e-15));
    fs::remove_all(dir);
}

TEST_CASE("config echo lines carry the resolved configuration and version") {
    const RunConfig cfg = parse_config(kMinimal);
    const auto lines = cfg.echo_lines();
    REQUIRE(!lines.empty());
    CHECK(lines[0] == std::string(kArtifactVersion));
    bool saw_chi = false, saw_seed = false;
    for (const auto& l : lines) {
        if (l == "model.chi = 1") saw_chi = true;
        if (l == "seed = 0") saw_seed = true;
    }
    CHECK(saw_chi);
    CHECK(saw_seed);
}

TEST_CASE("shipped demo configs parse and resolve") {
    const RunConfig demo =
        load_config(std::string(ARKS_SOURCE_DIR) + "/configs/bounded_demo.cfg");
    CHECK(demo.grid.cells_x == 64);
    CHECK(demo.init.normalize_mass == 1.0);
    CHECK(demo.resolve_monitor_p() == doctest::Approx(2.0));

    const SweepSpec sweep =
        load_sweep(std::string(ARKS_SOURCE_DIR) + "/configs/sweep_demo.cfg");
    CHECK(sweep.axes.size() == 2);
    CHECK(sweep.axes[0].count == 3);
}

TEST_CASE("sweep spec parsing and validation") {
    const std::string sweep = with_line(
        "sweep.axis1 = k, 0.3, 0.5, 3\nsweep.axis2 = l, 0.3, 0.5, 3, linear\n"
        "sweep.workers = 4");
    const SweepSpec spec = parse_sweep(sweep);
    CHECK(spec.axes.size() == 2);
    CHECK(spec.axes[0].name == "k");
    CHECK(spec.axes[1].count == 3);
    CHECK(spec.workers == 4);

    CHECK_THROWS_AS(parse_sweep(with_line("sweep.axis1 = dim, 1, 2, 2")),
                    ValidationError);
    CHECK_THROWS_AS(parse_sweep(with_line("sweep.axis1 = k, 0.3, 0.5, 1")),
                    ValidationError);
    CHECK_THROWS_AS(parse_sweep(with_line("sweep.axis1 = k, 0, 0.5, 3, log")),
                    ValidationError);
    CHECK_THROWS_AS(parse_sweep(kMinimal), ValidationError);  // no axis
    // sweep keys are unknown to the plain run parser
    CHECK_THROWS_AS(parse_config(with_line("sweep.axis1 = k, 0.3, 0.5, 3")), UnknownKey);
}
