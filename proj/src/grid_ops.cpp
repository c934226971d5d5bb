#include "pftg/grid_ops.hpp"

#include <cmath>
#include <numbers>

#include "pftg/linear.hpp"

namespace pftg {

Grid Grid::make(int dim, const std::array<int, 3>& n, const std::array<double, 3>& length) {
    if (dim < 1 || dim > 3) throw ValidationError("grid.dim must be 1, 2 or 3");
    Grid g;
    g.dim = dim;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (n[a] < 2) throw ValidationError("grid.n entries must be >= 2");
            if (!(length[a] > 0)) throw ValidationError("grid.length entries must be > 0");
            g.n[a] = n[a];
            g.length[a] = length[a];
            g.h[a] = length[a] / n[a];
        } else {
            g.n[a] = 1;
            g.length[a] = 1;
            g.h[a] = 1;
        }
    }
    return g;
}

namespace {

// Pairwise (recursive blocked) summation.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

std::array<std::size_t, 3> strides(const Grid& g) {
    return {1, std::size_t(g.n[0]), std::size_t(g.n[0]) * g.n[1]};
}

} // namespace

Field laplacian_neumann(const Field& f) {
    const Grid& g = f.grid;
    Field out(g, 0.0);
    const auto st = strides(g);
    for (int a = 0; a < g.dim; ++a) {
        const double inv_h2 = 1.0 / (g.h[a] * g.h[a]);
        const std::size_t s = st[a];
        const int na = g.n[a];
        // loop over lines along axis a
        for (int k = 0; k < (a == 2 ? 1 : g.n[2]); ++k)
            for (int j = 0; j < (a == 1 ? 1 : g.n[1]); ++j)
                for (int i = 0; i < (a == 0 ? 1 : g.n[0]); ++i) {
                    std::size_t base = g.index(a == 0 ? 0 : i, a == 1 ? 0 : j, a == 2 ? 0 : k);
                    // interior faces only: mirror ghosts contribute nothing
                    for (int c = 0; c + 1 < na; ++c) {
                        std::size_t lo = base + std::size_t(c) * s;
                        std::size_t hi = lo + s;
                        double flux = (f.values[hi] - f.values[lo]) * inv_h2;
                        out.values[lo] += flux;
                        out.values[hi] -= flux;
                    }
                }
    }
    return out;
}

double integrate(const Field& f) {
    return pairwise_sum(f.values.data(), f.values.size()) * f.grid.cell_volume();
}

double mean(const Field& f) { return integrate(f) / f.grid.domain_volume(); }

double l1_norm(const Field& f) {
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
    return pairwise_sum(a.data(), a.size()) * f.grid.cell_volume();
}

double l2_norm(const Field& f) {
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.values[i] * f.values[i];
    return std::sqrt(pairwise_sum(a.data(), a.size()) * f.grid.cell_volume());
}

double max_abs(const Field& f) {
    double m = 0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double grad_sq_integral(const Field& f) {
    const Grid& g = f.grid;
    const auto st = strides(g);
    const double vol = g.cell_volume();
    std::vector<double> contrib;
    contrib.reserve(g.total_cells() * g.dim);
    for (int a = 0; a < g.dim; ++a) {
        const double inv_h = 1.0 / g.h[a];
        const std::size_t s = st[a];
        const int na = g.n[a];
        for (int k = 0; k < (a == 2 ? 1 : g.n[2]); ++k)
            for (int j = 0; j < (a == 1 ? 1 : g.n[1]); ++j)
                for (int i = 0; i < (a == 0 ? 1 : g.n[0]); ++i) {
                    std::size_t base = g.index(a == 0 ? 0 : i, a == 1 ? 0 : j, a == 2 ? 0 : k);
                    for (int c = 0; c + 1 < na; ++c) {
                        std::size_t lo = base + std::size_t(c) * s;
                        double d = (f.values[lo + s] - f.values[lo]) * inv_h;
                        contrib.push_back(d * d);
                    }
                }
    }
    return pairwise_sum(contrib.data(), contrib.size()) * vol;
}

std::vector<double> neumann_eigenvalues(const Grid& grid) {
    std::vector<double> lam(grid.total_cells());
    for (int k2 = 0; k2 < grid.n[2]; ++k2)
        for (int k1 = 0; k1 < grid.n[1]; ++k1)
            for (int k0 = 0; k0 < grid.n[0]; ++k0) {
                std::array<int, 3> k{k0, k1, k2};
                double v = 0;
                for (int a = 0; a < grid.dim; ++a)
                    v += 2.0 / (grid.h[a] * grid.h[a]) *
                         (std::cos(std::numbers::pi * k[a] / grid.n[a]) - 1.0);
                lam[grid.index(k0, k1, k2)] = v;
            }
    return lam;
}

namespace {

// Jacobi diagonal of (a I - b Lap_h): boundary cells have fewer interior faces.
std::vector<double> helmholtz_diagonal(const Grid& g, double a, double b) {
    std::vector<double> d(g.total_cells(), a);
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                std::array<int, 3> idx{i, j, k};
                double s = 0;
                for (int ax = 0; ax < g.dim; ++ax) {
                    int faces = (idx[ax] > 0 ? 1 : 0) + (idx[ax] + 1 < g.n[ax] ? 1 : 0);
                    s += faces / (g.h[ax] * g.h[ax]);
                }
                d[g.index(i, j, k)] += b * s;
            }
    return d;
}

// DCT-II basis column k evaluated at cell i: cos(pi k (i + 1/2) / n).
// These are the eigenvectors of the 1D mirror-ghost Neumann Laplacian.
struct CosineBasis {
    int n;
    std::vector<double> c; // n x n, c[k*n + i]
    explicit CosineBasis(int n_) : n(n_), c(std::size_t(n_) * n_) {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                c[std::size_t(k) * n + i] = std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
};

// Applies the forward (values -> coefficients) or inverse transform along one axis.
void transform_axis(const Grid& g, std::vector<double>& v, const CosineBasis& basis, int axis,
                    bool forward) {
    const auto st = std::array<std::size_t, 3>{1, std::size_t(g.n[0]),
                                               std::size_t(g.n[0]) * g.n[1]};
    const std::size_t s = st[axis];
    const int na = g.n[axis];
    std::vector<double> line(na), res(na);
    for (int k = 0; k < (axis == 2 ? 1 : g.n[2]); ++k)
        for (int j = 0; j < (axis == 1 ? 1 : g.n[1]); ++j)
            for (int i = 0; i < (axis == 0 ? 1 : g.n[0]); ++i) {
                std::size_t base = g.index(axis == 0 ? 0 : i, axis == 1 ? 0 : j, axis == 2 ? 0 : k);
                for (int c = 0; c < na; ++c) line[c] = v[base + std::size_t(c) * s];
                if (forward) {
                    for (int kk = 0; kk < na; ++kk) {
                        double acc = 0;
                        for (int c = 0; c < na; ++c)
                            acc += basis.c[std::size_t(kk) * na + c] * line[c];
                        res[kk] = acc;
                    }
                } else {
                    for (int c = 0; c < na; ++c) {
                        double acc = line[0] / na;
                        for (int kk = 1; kk < na; ++kk)
                            acc += 2.0 / na * basis.c[std::size_t(kk) * na + c] * line[kk];
                        res[c] = acc;
                    }
                }
                for (int c = 0; c < na; ++c) v[base + std::size_t(c) * s] = res[c];
            }
}

Field solve_helmholtz_dct(const Grid& g, double a, double b, const Field& rhs) {
    Field x(g);
    x.values = rhs.values;
    std::vector<CosineBasis> bases;
    bases.reserve(g.dim);
    for (int ax = 0; ax < g.dim; ++ax) bases.emplace_back(g.n[ax]);
    for (int ax = 0; ax < g.dim; ++ax) transform_axis(g, x.values, bases[ax], ax, true);
    auto lam = neumann_eigenvalues(g);
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        double denom = a - b * lam[i];
        if (denom == 0)
            x.values[i] = 0; // constant mode of the singular a = 0 solve
        else
            x.values[i] /= denom;
    }
    for (int ax = 0; ax < g.dim; ++ax) transform_axis(g, x.values, bases[ax], ax, false);
    return x;
}

} // namespace

Field solve_helmholtz(const Grid& grid, double a, double b, const Field& rhs,
                      const HelmholtzOptions& opts) {
    if (b < 0) throw ValidationError("solve_helmholtz requires b >= 0");
    if (a < 0) throw ValidationError("solve_helmholtz requires a >= 0");
    const bool singular = (a == 0.0);
    if (singular) {
        if (std::abs(mean(rhs)) > 1e-10)
            throw SingularSystem("a = 0 Helmholtz solve requires a zero-mean right-hand side");
        if (b == 0) throw SingularSystem("a = 0 and b = 0 leaves no operator to invert");
    }
    if (opts.method == LinearMethod::CosineTransform) return solve_helmholtz_dct(grid, a, b, rhs);

    long max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * long(grid.total_cells());
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        Field tmp(grid);
        tmp.values = in;
        Field lap = laplacian_neumann(tmp);
        out.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = a * in[i] - b * lap.values[i];
    };
    auto diag = helmholtz_diagonal(grid, a, b);
    Field x(grid);
    auto res = cg_solve(apply, rhs.values, x.values, diag, opts.tol_lin, max_iter, singular);
    if (!res.converged)
        throw SingularSystem("Helmholtz CG did not reach tolerance after " +
                             std::to_string(res.iterations) + " iterations");
    return x;
}

} // namespace pftg
