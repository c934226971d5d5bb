#include "pftg/snapshot_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <sys/stat.h>

namespace pftg {

namespace {

constexpr char kMagic[5] = {'P', 'F', 'T', 'G', '1'};

template <class T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw FormatError("snapshot truncated");
    return v;
}

void put_array(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              std::streamsize(v.size() * sizeof(double)));
}

void get_array(std::ifstream& in, std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
    if (!in) throw FormatError("snapshot truncated");
}

} // namespace

void write_snapshot(const State& state, const std::string& path) {
    state.check_consistent();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open `" + path + "` for writing");
    out.write(kMagic, 5);
    const Grid& g = state.grid();
    put<std::uint8_t>(out, std::uint8_t(g.dim));
    for (int a = 0; a < g.dim; ++a) put<std::uint64_t>(out, std::uint64_t(g.n[a]));
    for (int a = 0; a < g.dim; ++a) put<double>(out, g.length[a]);
    put<double>(out, state.t);
    put_array(out, state.mu.values);
    put_array(out, state.u.values);
    put_array(out, state.sigma.values);
    if (!out) throw FormatError("short write to `" + path + "`");
}

State read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open `" + path + "`");
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw FormatError("`" + path + "` is not a state snapshot (bad magic)");
    int dim = get<std::uint8_t>(in);
    if (dim < 1 || dim > 3) throw FormatError("snapshot dim out of range");
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> length{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
        std::uint64_t na = get<std::uint64_t>(in);
        if (na < 2 || na > (1u << 24)) throw FormatError("snapshot cell count out of range");
        n[a] = int(na);
    }
    for (int a = 0; a < dim; ++a) length[a] = get<double>(in);
    Grid g = Grid::make(dim, n, length);
    State s(g, get<double>(in));
    get_array(in, s.mu.values);
    get_array(in, s.u.values);
    get_array(in, s.sigma.values);
    char extra;
    if (in.read(&extra, 1)) throw FormatError("trailing bytes in `" + path + "`");
    return s;
}

State read_snapshot(const std::string& path, const Grid& expected) {
    State s = read_snapshot(path);
    if (!(s.grid() == expected))
        throw GridMismatch("snapshot `" + path + "` was written on a different grid");
    return s;
}

const char* const kTimeseriesHeader =
    "t,mass,energy_intro,energy_gamma,dissipation,reaction_l2,grad_mu_l2,grad_sigma_l2,"
    "steady_residual_u,osc_mu,osc_sigma,newton_iters,linear_iters";

void append_timeseries(const DiagnosticsRecord& r, const std::string& path) {
    bool need_header = true;
    struct stat st{};
    if (::stat(path.c_str(), &st) == 0 && st.st_size > 0) need_header = false;
    std::ofstream out(path, std::ios::app);
    if (!out) throw FormatError("cannot open `" + path + "` for appending");
    if (need_header) out << kTimeseriesHeader << "\n";
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%ld",
                  r.t, r.mass, r.energy_intro, r.energy_gamma, r.dissipation, r.reaction_l2,
                  r.grad_mu_l2, r.grad_sigma_l2, r.steady_residual_u, r.osc_mu, r.osc_sigma,
                  r.newton_iters, r.linear_iters);
    out << buf << "\n";
    if (!out) throw FormatError("short write to `" + path + "`");
}

std::vector<DiagnosticsRecord> read_timeseries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open `" + path + "`");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("`" + path + "`: empty time series");
    if (line != kTimeseriesHeader) throw FormatError("`" + path + "`: unexpected CSV header");
    std::vector<DiagnosticsRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        DiagnosticsRecord r;
        int n = std::sscanf(line.c_str(),
                            "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d,%ld", &r.t, &r.mass,
                            &r.energy_intro, &r.energy_gamma, &r.dissipation, &r.reaction_l2,
                            &r.grad_mu_l2, &r.grad_sigma_l2, &r.steady_residual_u, &r.osc_mu,
                            &r.osc_sigma, &r.newton_iters, &r.linear_iters);
        if (n != 13)
            throw FormatError("`" + path + "` line " + std::to_string(lineno) + ": bad CSV row");
        out.push_back(r);
    }
    return out;
}

} // namespace pftg
