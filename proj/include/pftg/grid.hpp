#ifndef PFTG_GRID_HPP
#define PFTG_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "pftg/errors.hpp"

namespace pftg {

/// Uniform Cartesian cell-centered grid, 1-3 dimensions.
/// Cells are indexed x-fastest; unused axes have n = 1 and do not contribute faces.
struct Grid {
    int dim = 1;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> length{1, 1, 1};
    std::array<double, 3> h{1, 1, 1};

    static Grid make(int dim, const std::array<int, 3>& n, const std::array<double, 3>& length);

    std::size_t total_cells() const {
        return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]);
    }
    double cell_volume() const {
        double v = 1;
        for (int a = 0; a < dim; ++a) v *= h[a];
        return v;
    }
    double domain_volume() const {
        double v = 1;
        for (int a = 0; a < dim; ++a) v *= length[a];
        return v;
    }
    std::size_t index(int i, int j = 0, int k = 0) const {
        return (std::size_t(k) * n[1] + j) * n[0] + i;
    }
    /// Cell-center coordinate along an axis.
    double center(int axis, int i) const { return (i + 0.5) * h[axis]; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Scalar field of cell values on a grid (x-fastest ordering).
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0) : grid(g), values(g.total_cells(), fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    static Field constant(const Grid& g, double c) { return Field(g, c); }
};

} // namespace pftg

#endif
