#include "support.hpp"

#include "wstark/errors.hpp"
#include "wstark/io.hpp"
#include "wstark/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wstark;
using testing::scratch_dir;

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ScenarioConfig preset_in(const std::string& dir) {
    auto kv = standard_preset_config();
    kv.set("output.directory", dir);
    kv.set("run.samples", "60");
    return ScenarioConfig::from_config(kv);
}

}  // namespace

TEST_CASE("scenario configuration errors") {
    auto bad = [](const std::string& text) { return ScenarioConfig::from_config(KeyValueConfig::parse(text)); };
    CHECK_NOTHROW(bad("[lattice]\nv0 = 4.5\nf = 0.5\n"));
    CHECK_THROWS_AS(bad("[lattice]\nv1 = 4.5\n"), ConfigError);
    CHECK_THROWS_AS(bad("[colours]\nred = 1\n"), ConfigError);
    CHECK_THROWS_AS(bad("[run]\nmodel = magic\n"), ConfigError);
    CHECK_THROWS_AS(bad("[run]\nsamples = 0\n"), ConfigError);
    CHECK_THROWS_AS(bad("[initial]\nkind = custom\n"), ConfigError);
    CHECK_THROWS_AS(bad("[lattice]\nf = -1\n"), ConfigError);
    CHECK_THROWS_AS(bad("[run]\ncoupling = everything\n"), ConfigError);
    CHECK(parse_model("pde") == Model::Pde);
    CHECK(model_label(Model::Ode) == "ode");
}

TEST_CASE("scenario configuration round trip") {
    auto cfg = preset_in("somewhere");
    cfg.initial.kind = InitialKind::PlaneWave;
    cfg.initial.n_sites = 9;
    cfg.initial.k0 = 0.25;
    cfg.run.t_end = 123.0;
    const auto back = ScenarioConfig::from_config(KeyValueConfig::parse(cfg.to_config().to_string()));
    CHECK(back.to_config().to_string() == cfg.to_config().to_string());
    CHECK(back.run.t_end == 123.0);
    CHECK(back.initial.n_sites == 9);
    CHECK(back.lattice.f0() == 0.1);
}

TEST_CASE("initial states and horizons") {
    InitialSpec s;
    s.kind = InitialKind::PlaneWave;
    s.n_sites = 4;
    s.k0 = 1.0;
    s.first_site = 2;
    const auto d = make_initial_state(s, {0, 10});
    CHECK(d.populated(1e-12) == SiteWindow{2, 5});
    CHECK(d.norm() == doctest::Approx(1.0));
    const auto p = LatticeParams::standard_preset(0.1, 0.51);
    CHECK(default_horizon(p, 0.003) == doctest::Approx(2 * 2 * std::numbers::pi / 0.01));
    CHECK(default_horizon(LatticeParams::standard_preset(0.1, 0.5), 0.004) == doctest::Approx(20 / 0.004));
    CHECK(default_horizon(LatticeParams::standard_preset(), 0.0) == doctest::Approx(10 * 2 * std::numbers::pi / 0.5));
}

TEST_CASE("run writes its outputs and reruns identically from the manifest") {
    const auto dir = scratch_dir("run_exact");
    std::ostringstream log;
    BasisStore store;
    const auto report = cmd_run(preset_in(dir), log, &store);
    CHECK(report.ok);
    for (const char* f : {"populations.csv", "observables.csv", "populations.gp", "observables.gp", "manifest.cfg"})
        CHECK(fs::exists(dir + "/" + f));
    CHECK_FALSE(fs::exists(dir + "/comparison.csv"));

    auto manifest = KeyValueConfig::load(dir + "/manifest.cfg");
    CHECK(manifest.get_string("manifest.command") == "run");
    CHECK(manifest.get_double("manifest.omega1") == report.omega1);
    const auto again = scratch_dir("run_exact_again");
    manifest.set("output.directory", again);
    cmd_run(ScenarioConfig::from_config(manifest), log, &store);
    CHECK(slurp(dir + "/observables.csv") == slurp(again + "/observables.csv"));
    CHECK(slurp(dir + "/populations.csv") == slurp(again + "/populations.csv"));

    const auto series = read_observables_csv(dir + "/observables.csv");
    CHECK(series.times.size() == 61);
    CHECK(series.times.back() == doctest::Approx(report.t_end));
}

TEST_CASE("ode runs compare against the exact propagator") {
    const auto dir = scratch_dir("run_ode");
    auto cfg = preset_in(dir);
    cfg.run.model = Model::Ode;
    cfg.run.t_end = 400.0;
    std::ostringstream log;
    const auto report = cmd_run(cfg, log);
    CHECK(report.ok);
    CHECK(fs::exists(dir + "/comparison.csv"));
    CHECK(fs::exists(dir + "/comparison.gp"));
    CHECK(report.norm_drift < 1e-9);
}

TEST_CASE("cached basis gives the identical report") {
    const auto dir = scratch_dir("basis_cache");
    auto cfg = preset_in(dir);
    std::ostringstream a, b;
    const auto first = cmd_basis(cfg, a);
    CHECK_FALSE(first.loaded);
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir))
        found |= e.path().filename().string().rfind("basis-", 0) == 0;
    CHECK(found);
    const auto second = cmd_basis(cfg, b);
    CHECK(second.loaded);
    CHECK(second.basis->x1() == first.basis->x1());
    CHECK(second.text == first.text);
    CHECK(b.str().find("basis from cache") != std::string::npos);
    CHECK(first.text.find("participation") != std::string::npos);
}

TEST_CASE("a failing run leaves no partial outputs") {
    const auto dir = scratch_dir("run_fail");
    auto cfg = preset_in(dir);
    cfg.run.model = Model::Pde;
    cfg.run.pde_dt = 1.0;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_run(cfg, log), ConfigError);
    for (const char* f : {"populations.csv", "observables.csv", "manifest.cfg"}) CHECK_FALSE(fs::exists(dir + "/" + f));
}

TEST_CASE("sweep records failed points in their rows") {
    const auto dir = scratch_dir("sweep");
    auto cfg = preset_in(dir);
    std::ostringstream log;
    const auto report = cmd_sweep(cfg, "f0", {0.05, -1.0, 0.1}, 2, log);
    CHECK(report.failed == 1);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].find(",ok,") != std::string::npos);
    CHECK(report.rows[1].find(",error,") != std::string::npos);
    CHECK(fs::exists(dir + "/summary.csv"));
    CHECK(fs::exists(dir + "/point_2/observables.csv"));
    CHECK_FALSE(fs::exists(dir + "/point_1/observables.csv"));
    CHECK_THROWS_AS(cmd_sweep(cfg, "mass", {1.0}, 1, log), ConfigError);
}
