#ifndef PFTG_EXPERIMENTS_HPP
#define PFTG_EXPERIMENTS_HPP

#include <optional>

#include "pftg/config.hpp"
#include "pftg/snapshot_io.hpp"
#include "pftg/steady_state.hpp"

namespace pftg {

/// Builds the initial state from the config (deterministic given the seed).
/// Throws InvalidInitialData when beta_hat(u0) is not finite everywhere.
State build_initial_state(const RunConfig& cfg);

struct RelaxationResult {
    State final_state;
    DiagnosticsRecord final_record;
    std::size_t steps_taken = 0;
    bool steady_detected = false;
    double t_detected = 0;
    long energy_violations = 0; ///< steps with E_gamma increase beyond slack
    std::string output_dir;
};

/// Time-steps the configured scheme (viscous for alpha > 0, limit for alpha = 0)
/// to t_end, writing timeseries.csv, periodic snapshots, final.snap and the
/// resolved config into cfg.output_dir. On NewtonDivergence a step is retried
/// with a halved dt, up to 6 halvings, then the failure is rethrown.
/// Deterministic: the same config and seed give bit-identical outputs.
RelaxationResult run_relaxation(const RunConfig& cfg,
                                const std::optional<State>& resume_from = std::nullopt);

struct AlphaSweepReport {
    std::vector<double> alphas;  ///< descending, > 0
    std::vector<double> d_u;     ///< ||u_alpha(T) - u_0(T)||_2
    std::vector<double> d_sigma; ///< ||sigma_alpha(T) - sigma_0(T)||_2
    std::vector<AprioriNormReport> norms; ///< per alpha, limit run last
    double limit_residual_max_l2 = 0;     ///< max over steps of the limit-scheme
                                          ///< chemical-potential equation residual
    bool d_monotone_within_slack = false; ///< d nonincreasing within 10%
    double alpha_uniform_ratio = 0;       ///< worst max/min over the unweighted norms
    std::string config_text;
};

/// Runs the viscous scheme for each alpha and the limit scheme for alpha = 0
/// from the shared initial state of cfg_base (whose own alpha is ignored).
AlphaSweepReport sweep_alpha(const RunConfig& cfg_base, const std::vector<double>& alphas);

struct EpsSweepReport {
    PotentialSpec base;              ///< kind and kappa; eps taken from the list
    std::vector<double> eps;         ///< descending
    std::vector<double> points;
    std::vector<std::vector<double>> moreau; ///< [eps index][point index]
    std::vector<double> beta_hat_values;     ///< +inf where undefined
    bool monotone = false; ///< columns nondecreasing as eps decreases
    bool bounded = false;  ///< <= beta_hat wherever finite
};

EpsSweepReport sweep_eps(const PotentialSpec& base, const std::vector<double>& eps_list,
                         const std::vector<double>& points);

struct DependenceReport {
    std::vector<double> deltas;        ///< descending
    std::vector<double> amplification; ///< K(delta) = ||difference at T||_2 / delta
    std::vector<double> ratios;        ///< K(delta_i) / K(delta_{i+1})
    bool ratios_within_factor_2 = false;
    std::string config_text;
};

/// Perturbs u0 by delta times a fixed unit-L2 profile and measures the
/// terminal-state amplification.
DependenceReport probe_continuous_dependence(const RunConfig& cfg,
                                             const std::vector<double>& deltas);

} // namespace pftg

#endif
