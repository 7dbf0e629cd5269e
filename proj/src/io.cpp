#include "wstark/io.hpp"

#include "wstark/config.hpp"
#include "wstark/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace wstark {

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw Error("cannot open " + path);
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& path) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr == b) throw Error("malformed number '" + s + "' in " + path);
    return v;
}

void write_doubles(std::ostream& out, const double* v, std::size_t n) {
    out.write(reinterpret_cast<const char*>(v), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::istream& in, double* v, std::size_t n, const std::string& path) {
    in.read(reinterpret_cast<char*>(v), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw Error("truncated binary payload in " + path);
}

// Reads `key value...` header lines up to `end`.
std::map<std::string, std::string> read_header(std::istream& in, const std::string& magic, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != magic) throw Error(path + " is not a " + magic + " file");
    std::map<std::string, std::string> h;
    while (std::getline(in, line)) {
        if (line == "end") return h;
        const auto sp = line.find(' ');
        if (sp == std::string::npos) throw Error("malformed header line '" + line + "' in " + path);
        h[line.substr(0, sp)] = line.substr(sp + 1);
    }
    throw Error("unterminated header in " + path);
}

std::vector<double> header_numbers(const std::map<std::string, std::string>& h, const std::string& key,
                                   std::size_t count, const std::string& path) {
    const auto it = h.find(key);
    if (it == h.end()) throw Error("header of " + path + " lacks '" + key + "'");
    std::vector<double> v;
    for (const auto& cell : split(it->second, ' '))
        if (!cell.empty()) v.push_back(parse_double(cell, path));
    if (v.size() != count) throw Error("header field '" + key + "' of " + path + " has the wrong arity");
    return v;
}

}  // namespace

void write_observables_csv(const std::string& path, const ObservableSeries& s) {
    auto out = open_out(path);
    out << "t,mean_x,mean_x2,var_x\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        out << format_double(s.times[i]) << ',' << format_double(s.mean_x[i]) << ',' << format_double(s.mean_x2[i])
            << ',' << format_double(s.variance(i)) << '\n';
    if (!out) throw Error("write failed for " + path);
}

void write_populations_csv(const std::string& path, const ObservableSeries& s) {
    auto out = open_out(path);
    out << 't';
    const std::size_t width = s.populations.empty() ? 0 : s.populations.front().size();
    for (std::size_t j = 0; j < width; ++j) out << ',' << s.n_lo + static_cast<int>(j);
    out << '\n';
    for (std::size_t i = 0; i < s.populations.size(); ++i) {
        out << format_double(s.times[i]);
        for (double p : s.populations[i]) out << ',' << format_double(p);
        out << '\n';
    }
    if (!out) throw Error("write failed for " + path);
}

ObservableSeries read_observables_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "t,mean_x,mean_x2,var_x") throw Error(path + " is not an observables file");
    ObservableSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 4) throw Error("malformed observables row in " + path);
        s.times.push_back(parse_double(cells[0], path));
        s.mean_x.push_back(parse_double(cells[1], path));
        s.mean_x2.push_back(parse_double(cells[2], path));
    }
    return s;
}

ObservableSeries read_populations_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + " is empty");
    const auto head = split(line, ',');
    if (head.empty() || head[0] != "t") throw Error(path + " is not a populations file");
    ObservableSeries s;
    if (head.size() > 1) s.n_lo = static_cast<int>(parse_double(head[1], path));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != head.size()) throw Error("malformed populations row in " + path);
        s.times.push_back(parse_double(cells[0], path));
        std::vector<double> row;
        for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_double(cells[j], path));
        s.populations.push_back(std::move(row));
    }
    return s;
}

AmplitudeState read_amplitudes_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::map<int, cplx> values;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line, ',');
        if (cells.size() != 3) throw ConfigError("amplitude rows must be n,re,im in " + path);
        if (cells[0] == "n") continue;
        const int n = static_cast<int>(parse_double(cells[0], path));
        if (values.count(n)) throw ConfigError("site " + std::to_string(n) + " listed twice in " + path);
        values[n] = {parse_double(cells[1], path), parse_double(cells[2], path)};
    }
    if (values.empty()) throw ConfigError("no amplitudes in " + path);
    AmplitudeState d = AmplitudeState::zeros({values.begin()->first, values.rbegin()->first});
    for (const auto& [n, v] : values) d[n] = v;
    return d;
}

void write_amplitudes_csv(const std::string& path, const AmplitudeState& d) {
    auto out = open_out(path);
    out << "n,re,im\n";
    for (int n = d.n_lo; n <= d.n_hi(); ++n)
        out << n << ',' << format_double(d.at(n).real()) << ',' << format_double(d.at(n).imag()) << '\n';
}

std::uint64_t basis_cache_key(double v0, double f, const Grid& grid, SiteWindow window, const BasisOptions& o) {
    std::ostringstream s;
    s << format_double(v0) << '|' << format_double(f) << '|' << format_double(grid.x_min()) << '|'
      << format_double(grid.x_max()) << '|' << grid.n_points() << '|' << window.n_lo << '|' << window.n_hi << '|'
      << o.stencil_order << '|' << format_double(o.tol.ortho) << '|' << format_double(o.tol.ladder_rel) << '|'
      << format_double(o.tol.trans) << '|' << format_double(o.max_participation) << '|'
      << format_double(o.max_spacing) << '|' << o.bulk_margin;
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex_key(std::uint64_t key) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(key));
    return buf;
}

void save_basis(const std::string& path, const WannierStarkBasis& b) {
    const auto& o = b.options();
    auto out = open_out(path, true);
    out << "wstark-basis 1\n"
        << "key " << hex_key(basis_cache_key(b.v0(), b.f(), b.grid(), b.sites(), o)) << '\n'
        << "lattice " << format_double(b.v0()) << ' ' << format_double(b.f()) << '\n'
        << "grid " << format_double(b.grid().x_min()) << ' ' << format_double(b.grid().x_max()) << ' '
        << b.grid().n_points() << '\n'
        << "window " << b.sites().n_lo << ' ' << b.sites().n_hi << '\n'
        << "reference " << b.reference_site() << '\n'
        << "options " << o.stencil_order << ' ' << format_double(o.tol.ortho) << ' ' << format_double(o.tol.ladder_rel)
        << ' ' << format_double(o.tol.trans) << ' ' << format_double(o.max_participation) << ' '
        << format_double(o.max_spacing) << ' ' << o.bulk_margin << '\n'
        << "next_band_gap " << format_double(b.diagnostics().next_band_gap) << '\n'
        << "end\n";
    write_doubles(out, b.energies().data(), b.energies().size());
    for (int n = b.sites().n_lo; n <= b.sites().n_hi; ++n) write_doubles(out, b.state(n).data(), b.state(n).size());
    if (!out) throw Error("write failed for " + path);
}

std::optional<WannierStarkBasis> load_basis(const std::string& path, std::uint64_t expected_key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    const auto h = read_header(in, "wstark-basis 1", path);
    if (h.count("key") == 0 || h.at("key") != hex_key(expected_key)) return std::nullopt;
    const auto lat = header_numbers(h, "lattice", 2, path);
    const auto g = header_numbers(h, "grid", 3, path);
    const auto w = header_numbers(h, "window", 2, path);
    const auto ref = header_numbers(h, "reference", 1, path);
    const auto opt = header_numbers(h, "options", 7, path);
    const auto gap = header_numbers(h, "next_band_gap", 1, path);
    const Grid grid(g[0], g[1], static_cast<int>(g[2]));
    const SiteWindow window{static_cast<int>(w[0]), static_cast<int>(w[1])};
    BasisOptions options;
    options.stencil_order = static_cast<int>(opt[0]);
    options.tol = {opt[1], opt[2], opt[3]};
    options.max_participation = opt[4];
    options.max_spacing = opt[5];
    options.bulk_margin = static_cast<int>(opt[6]);
    if (basis_cache_key(lat[0], lat[1], grid, window, options) != expected_key) return std::nullopt;

    std::vector<double> energies(static_cast<std::size_t>(window.size()));
    read_doubles(in, energies.data(), energies.size(), path);
    std::vector<std::vector<double>> states(static_cast<std::size_t>(window.size()),
                                            std::vector<double>(static_cast<std::size_t>(grid.n_points())));
    for (auto& s : states) read_doubles(in, s.data(), s.size(), path);
    return WannierStarkBasis(grid, lat[0], lat[1], window, static_cast<int>(ref[0]), std::move(states),
                             std::move(energies), options, gap[0]);
}

void write_wavefunction(const std::string& path, const std::vector<cplx>& psi, const Grid& grid, double t) {
    if (static_cast<int>(psi.size()) != grid.n_points()) throw ConfigError("wave function does not match the grid");
    auto out = open_out(path, true);
    out << "wstark-wavefunction 1\n"
        << "grid " << format_double(grid.x_min()) << ' ' << format_double(grid.x_max()) << ' ' << grid.n_points() << '\n'
        << "time " << format_double(t) << '\n'
        << "samples " << psi.size() << '\n'
        << "end\n";
    write_doubles(out, reinterpret_cast<const double*>(psi.data()), 2 * psi.size());
    if (!out) throw Error("write failed for " + path);
}

WaveSnapshot read_wavefunction(const std::string& path) {
    auto in = open_in(path, true);
    const auto h = read_header(in, "wstark-wavefunction 1", path);
    const auto g = header_numbers(h, "grid", 3, path);
    const auto t = header_numbers(h, "time", 1, path);
    const auto n = header_numbers(h, "samples", 1, path);
    WaveSnapshot snap{Grid(g[0], g[1], static_cast<int>(g[2])), t[0], {}};
    if (static_cast<int>(n[0]) != snap.grid.n_points()) throw Error("sample count does not match the grid in " + path);
    snap.psi.resize(static_cast<std::size_t>(n[0]));
    read_doubles(in, reinterpret_cast<double*>(snap.psi.data()), 2 * snap.psi.size(), path);
    return snap;
}

}  // namespace wstark
