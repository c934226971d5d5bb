#ifndef PFTG_GRID_OPS_HPP
#define PFTG_GRID_OPS_HPP

#include <vector>

#include "pftg/grid.hpp"

namespace pftg {

/// Second-order 5/7-point Laplacian with mirror ghost cells, so the discrete
/// normal derivative vanishes on every boundary face. Row and column sums are
/// exactly zero.
Field laplacian_neumann(const Field& f);

/// Discrete integral: sum of values times cell volume (pairwise summation).
double integrate(const Field& f);

/// integrate(f) / |Omega|.
double mean(const Field& f);

/// Integral of |f| (pairwise summation).
double l1_norm(const Field& f);

/// sqrt of integral of f^2.
double l2_norm(const Field& f);

double max_abs(const Field& f);

/// Face-based gradient energy: sum over interior faces of ((f_j - f_i)/h)^2 * cell volume.
/// Satisfies -integrate(f * laplacian_neumann(f)) == grad_sq_integral(f) up to rounding.
double grad_sq_integral(const Field& f);

/// Tensor-product eigenvalues of the discrete Neumann Laplacian,
/// lambda_k = sum_a (2/h_a^2)(cos(pi k_a / n_a) - 1), in x-fastest order over k.
/// All are <= 0 and exactly one (k = 0) is zero.
std::vector<double> neumann_eigenvalues(const Grid& grid);

enum class LinearMethod { CG, CosineTransform };

struct HelmholtzOptions {
    double tol_lin = 1e-11; ///< relative residual tolerance
    long max_iter = 0;      ///< 0 means 10 * total cells
    LinearMethod method = LinearMethod::CG;
};

/// Solves (a I - b Lap_h) x = rhs with b >= 0 and a > 0, or a = 0 with
/// mean(rhs) ~ 0, in which case the zero-mean solution is returned.
/// CG path uses a Jacobi preconditioner; the cosine-transform path
/// diagonalizes per axis. Both honor ||(aI - b Lap)x - rhs||_2 <= tol_lin ||rhs||_2.
Field solve_helmholtz(const Grid& grid, double a, double b, const Field& rhs,
                      const HelmholtzOptions& opts = {});

} // namespace pftg

#endif
