#include "wstark/errors.hpp"
#include "wstark/scenario.hpp"
#include "wstark/validation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct CommonOptions {
    std::string config;
    std::string out;
    std::string preset;
    std::string model;
    long seed = 0;
    bool seed_set = false;
};

wstark::ScenarioConfig resolve(const CommonOptions& o) {
    wstark::KeyValueConfig kv;
    if (!o.preset.empty()) {
        if (o.preset != "paper") throw wstark::ConfigError("unknown preset '" + o.preset + "' (available: paper)");
        kv = wstark::standard_preset_config();
    }
    if (!o.config.empty()) kv.merge(wstark::KeyValueConfig::load(o.config));
    if (o.preset.empty() && o.config.empty()) throw wstark::ConfigError("give --config <path> or --preset paper");
    if (!o.out.empty()) kv.set("output.directory", o.out);
    if (!o.model.empty()) kv.set("run.model", o.model);
    if (o.seed_set) kv.set("run.seed", std::to_string(o.seed));
    return wstark::ScenarioConfig::from_config(kv);
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "Scenario file (sectioned key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--preset", o.preset, "Parameter preset: paper (v0 = 4.5, f = 0.5, f0 = 0.1, omega = 0.5)");
    cmd->add_option("--model", o.model, "Dynamics: exact, ode or pde")->check(CLI::IsMember({"exact", "ode", "pde"}));
    cmd->add_option("--seed", o.seed, "Seed recorded in the manifest and used by randomized checks")
        ->each([&o](const std::string&) { o.seed_set = true; });
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const wstark::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const wstark::WindowOverflowError& e) {
        std::cerr << "edge check failed: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const wstark::IntegrationError& e) {
        std::cerr << "integration aborted: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wannier-Stark dynamics of a driven tilted lattice"};
    app.set_version_flag("--version", wstark::kVersion);
    app.require_subcommand(1);

    CommonOptions basis_opts, run_opts, sweep_opts;
    auto* basis = app.add_subcommand("basis", "Build or load the Wannier-Stark basis and print its report");
    add_common(basis, basis_opts);

    auto* run = app.add_subcommand("run", "Run one scenario and write CSV, plot scripts and a manifest");
    add_common(run, run_opts);

    auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a parameter");
    add_common(sweep, sweep_opts);
    std::string axis;
    std::vector<double> values;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    sweep->add_option("--axis", axis, "Swept parameter")->required()->check(CLI::IsMember({"f", "v0", "f0", "omega", "k0"}));
    sweep->add_option("--values", values, "Parameter values (comma or space separated)")->required()->delimiter(',');
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
    wstark::ValidationOptions vopts;
    bool quick = false;
    validate->add_option("--seed", vopts.seed, "Seed of the randomized checks");
    validate->add_option("--golden", vopts.golden_path, "Breathing populations reference CSV")
        ->check(CLI::ExistingFile);
    validate->add_flag("--quick", quick, "Skip the wave-function checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*basis) {
        return guarded([&] {
            wstark::cmd_basis(resolve(basis_opts), std::cout);
            return kOk;
        });
    }
    if (*run) {
        return guarded([&] {
            const auto report = wstark::cmd_run(resolve(run_opts), std::cout);
            return report.ok ? kOk : kCheckFailed;
        });
    }
    if (*sweep) {
        return guarded([&] {
            std::cout << wstark::kSweepHeader << "\n";
            const auto report = wstark::cmd_sweep(resolve(sweep_opts), axis, values, jobs, std::cout);
            if (report.failed > 0) std::cerr << report.failed << " sweep points failed\n";
            return report.failed == 0 ? kOk : kCheckFailed;
        });
    }
    return guarded([&] {
        vopts.include_pde = !quick;
        wstark::ValidationSuite suite(vopts);
        int failed = 0;
        suite.run_all([&](const wstark::CheckResult& r) {
            std::cout << wstark::format_check(r) << std::endl;
            if (!r.pass) ++failed;
        });
        return failed == 0 ? kOk : kCheckFailed;
    });
}
