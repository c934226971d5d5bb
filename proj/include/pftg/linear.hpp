#ifndef PFTG_LINEAR_HPP
#define PFTG_LINEAR_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace pftg {

/// Matrix-free operator y = A x on raw coefficient vectors.
using LinOp = std::function<void(const std::vector<double>& x, std::vector<double>& y)>;

/// Preconditioner application z = M^{-1} r; an empty function means identity.
using Precond = std::function<void(const std::vector<double>& r, std::vector<double>& z)>;

struct KrylovResult {
    long iterations = 0;
    double residual = 0; ///< final true residual 2-norm
    bool converged = false;
};

/// Preconditioned conjugate gradient for SPD operators.
/// diag_precond holds the operator diagonal (Jacobi); empty disables preconditioning.
/// When project_mean is set, iterates and residuals are kept mean-free
/// (weights = all-ones); used for the singular a = 0 Neumann solve.
KrylovResult cg_solve(const LinOp& apply, const std::vector<double>& rhs, std::vector<double>& x,
                      const std::vector<double>& diag_precond, double rel_tol, long max_iter,
                      bool project_mean = false);

/// Preconditioned BiCGStab for general (nonsymmetric) operators, with true-residual
/// verification and restart on breakdown/stagnation.
KrylovResult bicgstab_solve(const LinOp& apply, const std::vector<double>& rhs,
                            std::vector<double>& x, const Precond& precond, double rel_tol,
                            long max_iter);

/// Convenience overload with a Jacobi (diagonal) preconditioner.
KrylovResult bicgstab_solve(const LinOp& apply, const std::vector<double>& rhs,
                            std::vector<double>& x, const std::vector<double>& diag_precond,
                            double rel_tol, long max_iter);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

} // namespace pftg

#endif
