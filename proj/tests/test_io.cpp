#include "support.hpp"

#include "wstark/errors.hpp"
#include "wstark/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace wstark;
using testing::preset_basis;
using testing::scratch_dir;

namespace fs = std::filesystem;

TEST_CASE("observables and populations round trip") {
    const auto dir = scratch_dir("io_series");
    ObservableSeries s;
    s.times = {0.0, 0.1, 1e3 / 3};
    s.mean_x = {0.49530722, -1.0 / 7, 3e-300};
    s.mean_x2 = {0.3, 2.0 / 3, 1e200};
    s.n_lo = -2;
    s.populations = {{0.1, 0.2, 0.7}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0, 1, 0}};
    write_observables_csv(dir + "/o.csv", s);
    write_populations_csv(dir + "/p.csv", s);
    const auto o = read_observables_csv(dir + "/o.csv");
    CHECK(o.times == s.times);
    CHECK(o.mean_x == s.mean_x);
    CHECK(o.mean_x2 == s.mean_x2);
    const auto p = read_populations_csv(dir + "/p.csv");
    CHECK(p.times == s.times);
    CHECK(p.n_lo == -2);
    CHECK(p.populations == s.populations);
    std::ifstream in(dir + "/o.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,mean_x,mean_x2,var_x");
}

TEST_CASE("amplitude files") {
    const auto dir = scratch_dir("io_amp");
    AmplitudeState d(-3, {cplx(0.1, -0.2), cplx(), cplx(1.0 / 3, 2e-17)}, 0.0);
    write_amplitudes_csv(dir + "/a.csv", d);
    const auto r = read_amplitudes_csv(dir + "/a.csv");
    CHECK(r.n_lo == -3);
    CHECK(r.amplitudes == d.amplitudes);

    std::ofstream(dir + "/b.csv") << "# two sites\nn,re,im\n4,0.6,0\n5,0,0.8\n";
    const auto b = read_amplitudes_csv(dir + "/b.csv");
    CHECK(b.n_lo == 4);
    CHECK(b.at(5) == cplx(0, 0.8));
    std::ofstream(dir + "/c.csv") << "n,re,im\n4,0.6\n";
    CHECK_THROWS_AS(read_amplitudes_csv(dir + "/c.csv"), ConfigError);
    CHECK_THROWS_AS(read_amplitudes_csv(dir + "/missing.csv"), std::exception);
}

TEST_CASE("basis bundle round trip and key check") {
    const auto dir = scratch_dir("io_basis");
    const auto& b = preset_basis();
    const auto key = basis_cache_key(b.v0(), b.f(), b.grid(), b.sites(), b.options());
    save_basis(dir + "/b.bin", b);
    const auto loaded = load_basis(dir + "/b.bin", key);
    REQUIRE(loaded);
    CHECK(loaded->x1() == b.x1());
    CHECK(loaded->x2() == b.x2());
    CHECK(loaded->energies() == b.energies());
    CHECK(loaded->sites() == b.sites());
    const auto s = loaded->state(2), r = b.state(2);
    CHECK(std::equal(s.begin(), s.end(), r.begin()));
    CHECK_FALSE(load_basis(dir + "/b.bin", key + 1));
    CHECK_FALSE(load_basis(dir + "/none.bin", key));

    CHECK(basis_cache_key(4.5, 0.5, b.grid(), b.sites(), b.options()) ==
          basis_cache_key(4.5, 0.5, b.grid(), b.sites(), b.options()));
    CHECK(basis_cache_key(4.5, 0.5, b.grid(), b.sites(), b.options()) !=
          basis_cache_key(4.5, 0.51, b.grid(), b.sites(), b.options()));
    CHECK(hex_key(255).size() == 16);
}

TEST_CASE("wave-function snapshots") {
    const auto dir = scratch_dir("io_wave");
    const Grid g(-2, 2 - 0.25, 16);
    std::vector<cplx> psi;
    for (int i = 0; i < 16; ++i) psi.emplace_back(i * 0.1, -1.0 / (i + 1));
    write_wavefunction(dir + "/w.bin", psi, g, 12.5);
    const auto w = read_wavefunction(dir + "/w.bin");
    CHECK(w.time == 12.5);
    CHECK(w.grid.n_points() == 16);
    CHECK(w.grid.x_min() == -2);
    CHECK(w.psi == psi);
    fs::resize_file(dir + "/w.bin", fs::file_size(dir + "/w.bin") - 8);
    CHECK_THROWS(read_wavefunction(dir + "/w.bin"));
}
