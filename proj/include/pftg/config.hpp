#ifndef PFTG_CONFIG_HPP
#define PFTG_CONFIG_HPP

#include <string>

#include "pftg/stepper.hpp"

namespace pftg {

/// How one scalar field is initialized.
struct FieldInit {
    enum class Kind { Constant, Noise, Tanh };
    Kind kind = Kind::Constant;
    double value = 0;     ///< Constant
    double mean = 0;      ///< Noise: uniform in [mean - amplitude, mean + amplitude]
    double amplitude = 0;
    double x0 = 0.5;      ///< Tanh: tanh((x - x0)/width) along the x axis
    double width = 0.1;

    friend bool operator==(const FieldInit&, const FieldInit&) = default;
};

struct InitSpec {
    FieldInit mu, u, sigma;
    std::string file; ///< nonempty: load the whole state from this snapshot instead

    friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

/// File form of a run: solver constants, grid, initial data and experiment knobs.
struct RunConfig {
    SolverConfig solver;
    int dim = 1;
    std::array<int, 3> n{64, 1, 1};
    std::array<double, 3> length{1, 1, 1};
    InitSpec init;
    double t_end = 1.0;
    long snapshot_every = 0; ///< steps between snapshots; 0 = only the final one
    unsigned long long seed = 0;
    std::string output_dir = "out";
    bool steady_detect = false;
    double steady_threshold = 1e-6;
    bool steady_stop = true;

    Grid make_grid() const { return Grid::make(dim, n, length); }
    void validate() const;

    bool operator==(const RunConfig& o) const;
};

/// Strict line-oriented `key = value` parser: `#` comments, dotted keys,
/// decimal numbers, true/false booleans, comma-separated lists.
/// Unknown and duplicate keys are rejected.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

} // namespace pftg

#endif
