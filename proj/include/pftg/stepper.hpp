#ifndef PFTG_STEPPER_HPP
#define PFTG_STEPPER_HPP

#include <utility>
#include <vector>

#include "pftg/grid_ops.hpp"
#include "pftg/potentials.hpp"

namespace pftg {

struct SolverConfig {
    double alpha = 0.1; ///< viscosity coefficient, in [0,1); 0 selects the limit scheme
    double gamma = 1.0; ///< reaction coupling, > 0
    PotentialSpec potential;
    ProliferationSpec proliferation;
    double dt = 1e-3;
    double tol_newton = 1e-10; ///< nonlinear residual inf-norm tolerance
    double tol_lin = 1e-11;    ///< Krylov relative residual tolerance
    int max_newton = 50;
    LinearMethod solver_kind = LinearMethod::CG;

    void validate() const;
};

/// The simulation unknowns (mu, u, sigma) on a shared grid, plus the clock.
struct State {
    double t = 0;
    Field mu, u, sigma;

    State() = default;
    State(const Grid& g, double t0 = 0) : t(t0), mu(g), u(g), sigma(g) {}

    const Grid& grid() const { return u.grid; }
    void check_consistent() const;
};

struct StepStats {
    int newton_iters = 0;
    double final_residual = 0;
    long linear_iters = 0;
    std::vector<double> residual_history; ///< inf-norm residual per Newton iteration
};

enum class Scheme { Viscous, Limit };

/// One semi-implicit step of the coupled system. With R+ = p(u^n)(sigma+ - gamma mu+):
///   alpha (mu+ - mu^n)/dt + (u+ - u^n)/dt - Lap mu+ = R+
///   mu+ = alpha (u+ - u^n)/dt - Lap u+ + beta_eps(u+) + lambda'(u^n)
///   (sigma+ - sigma^n)/dt - Lap sigma+ = -R+
/// The same discrete R+ enters the first and third equations, so
/// the integral of alpha mu + u + sigma is conserved to solver tolerance.
std::pair<State, StepStats> step_viscous(const State& state, const SolverConfig& cfg);

/// The alpha = 0 scheme: the chemical-potential equation becomes
///   mu+ = -Lap u+ + (u+)^3 - u^n
/// (implicit convex cubic, explicit concave part), quartic potential only.
std::pair<State, StepStats> step_limit(const State& state, const SolverConfig& cfg);

/// Full-system damped Newton behind both steps: matrix-free Jacobian and
/// BiCGStab inner solves. solver_kind picks the preconditioner: point-Jacobi
/// (cg) or block-triangular cosine-transform Helmholtz solves
/// (cosine_transform); both meet the same tolerances.
std::pair<State, StepStats> newton_solve(const State& state, const SolverConfig& cfg,
                                         Scheme scheme);

/// Residual fields of the three scheme equations at a candidate new state.
/// Exposed for diagnostics (e.g. the per-step limit-equation residual).
void scheme_residual(const State& prev, const State& next, const SolverConfig& cfg, Scheme scheme,
                     Field& r1, Field& r2, Field& r3);

} // namespace pftg

#endif
