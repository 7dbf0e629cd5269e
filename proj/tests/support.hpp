#pragma once

#include "wstark/params.hpp"
#include "wstark/ws_basis.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>

namespace testing {

/// Preset basis on the default grid, built once per test binary.
inline const wstark::WannierStarkBasis& preset_basis() {
    static const wstark::WannierStarkBasis basis = [] {
        const auto grid = wstark::Grid::standard_default();
        return wstark::solve_ws_basis(wstark::LatticeParams::standard_preset(), grid, wstark::default_window(grid));
    }();
    return basis;
}

/// Fresh empty directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("wstark_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace testing
