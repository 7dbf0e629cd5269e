#pragma once

#include "wstark/amplitudes.hpp"
#include "wstark/dynamics.hpp"
#include "wstark/ws_basis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wstark {

/// CSV with header `t,mean_x,mean_x2,var_x`; numbers round-trip exactly.
void write_observables_csv(const std::string& path, const ObservableSeries& series);
/// One row per sample: t followed by |d_n|^2; the header names each site index.
void write_populations_csv(const std::string& path, const ObservableSeries& series);

ObservableSeries read_observables_csv(const std::string& path);
/// Reads a populations file back into times, n_lo and populations.
ObservableSeries read_populations_csv(const std::string& path);

/// Site amplitudes from CSV lines `n,re,im` (header and # comments allowed).
AmplitudeState read_amplitudes_csv(const std::string& path);
void write_amplitudes_csv(const std::string& path, const AmplitudeState& d);

/// FNV-1a hash of the canonical text of (v0, f, grid, window, options).
std::uint64_t basis_cache_key(double v0, double f, const Grid& grid, SiteWindow window, const BasisOptions& options);
std::string hex_key(std::uint64_t key);

/// Binary basis bundle with a plain-text header (grid, window, key).
void save_basis(const std::string& path, const WannierStarkBasis& basis);
/// Loads a bundle; nullopt when the file is missing or its key differs.
std::optional<WannierStarkBasis> load_basis(const std::string& path, std::uint64_t expected_key);

/// Wave-function snapshot: text header (grid spec, time, sample count)
/// followed by interleaved little-endian re/im doubles.
void write_wavefunction(const std::string& path, const std::vector<cplx>& psi, const Grid& grid, double t);
struct WaveSnapshot {
    Grid grid;
    double time;
    std::vector<cplx> psi;
};
WaveSnapshot read_wavefunction(const std::string& path);

}  // namespace wstark
