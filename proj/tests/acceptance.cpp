#include "wstark/validation.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks, one line per criterion"};
    wstark::ValidationOptions options;
    bool quick = false;
    std::string write_golden;
    app.add_option("--seed", options.seed, "Seed of the randomized checks");
    app.add_option("--golden", options.golden_path, "Breathing populations reference CSV");
    app.add_flag("--quick", quick, "Skip the wave-function checks");
    app.add_option("--write-golden", write_golden, "Write the breathing reference CSV and exit");
    CLI11_PARSE(app, argc, argv);
    options.include_pde = !quick;

    try {
        wstark::ValidationSuite suite(options);
        if (!write_golden.empty()) {
            wstark::write_breathing_golden(write_golden, suite.preset_basis());
            std::cout << "wrote " << write_golden << "\n";
            return 0;
        }
        int failed = 0;
        suite.run_all([&](const wstark::CheckResult& r) {
            std::cout << wstark::format_check(r) << std::endl;
            if (!r.pass) ++failed;
        });
        std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
