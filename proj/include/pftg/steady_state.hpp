#ifndef PFTG_STEADY_STATE_HPP
#define PFTG_STEADY_STATE_HPP

#include <optional>
#include <span>

#include "pftg/diagnostics.hpp"

namespace pftg {

/// Stationary problem: find u with -Lap u + beta_eps(u) + lambda'(u) = mu_s.
struct StationaryProblem {
    double mu_s = 0;
    PotentialSpec potential;
    Grid grid;
    Field initial_guess;
};

/// Damped Newton with lambda' at the current iterate (fully implicit).
/// Returns u with inf-norm residual <= tol. Multiple solutions exist in general;
/// the result is the Newton basin of the supplied guess.
Field solve_stationary(const StationaryProblem& prob, double tol);

enum class OmegaBranch { Mixed, PurePlus, PureMinus, NotSteady };

struct OmegaClassification {
    OmegaBranch branch = OmegaBranch::NotSteady;
    /// |mean(sigma) - gamma mean(mu)|; the Mixed branch requires this <= tol.
    double mixed_defect = 0;
};

std::string to_string(OmegaBranch b);

/// Classifies a steady state per the pure-phase / mixed trichotomy.
/// Pure phases are recognized within a 10*eps collar around +-1 (the regularized
/// dynamics overshoot the obstacle by O(eps)). The stationarity gate accepts a
/// state when either the regularized residual or the residual against the
/// unregularized graph beta is small: an exact pure phase (u = 1, mu_s > 0)
/// solves the inclusion without solving the Yosida equation.
OmegaClassification classify_omega(const State& state, const SolverConfig& cfg, double tol);

/// L2 distance of mu_s + Lap u - lambda'(u) from the graph beta(u), pointwise.
double steady_residual_graph(const State& state, const SolverConfig& cfg);

struct SteadyThresholds {
    double grad_mu = 1e-6;
    double grad_sigma = 1e-6;
    double reaction = 1e-6;
    double steady_residual = 1e-6;
    double increment_rate = 1e-6; ///< on max field-wise L2 of (state_n - state_{n-1}) / dt

    static SteadyThresholds uniform(double v) { return {v, v, v, v, v}; }
};

/// True when all steady indicators (and, if prev is given, the time-increment
/// rates) fall below the thresholds.
bool is_steady(const State& state, const State* prev, const SolverConfig& cfg,
               const SteadyThresholds& th);

/// First state in the history satisfying is_steady (the first entry is checked
/// without an increment); nullopt if none.
std::optional<std::size_t> detect_convergence(std::span<const State> history,
                                              const SolverConfig& cfg,
                                              const SteadyThresholds& th);

} // namespace pftg

#endif
