#ifndef PFTG_DIAGNOSTICS_HPP
#define PFTG_DIAGNOSTICS_HPP

#include <span>

#include "pftg/stepper.hpp"

namespace pftg {

/// Per-step monitored quantities (one time-series CSV row).
struct DiagnosticsRecord {
    double t = 0;
    double mass = 0;             ///< integral of alpha mu + u + sigma
    double energy_intro = 0;     ///< 1/2|grad u|^2 + W_eps(u) + alpha/2 mu^2 + 1/2 sigma^2
    double energy_gamma = 0;     ///< alpha/2 mu^2 + 1/(2 gamma) sigma^2 + 1/2|grad u|^2 + W_eps(u)
    double dissipation = 0;      ///< |grad mu|^2 + 1/gamma |grad sigma|^2 (+ alpha |u_t|^2)
    double reaction_l2 = 0;      ///< L2 norm of p(u)(sigma - gamma mu)
    double grad_mu_l2 = 0;
    double grad_sigma_l2 = 0;
    double steady_residual_u = 0; ///< L2 norm of -Lap u + beta_eps(u) + lambda'(u) - mean(mu)
    double osc_mu = 0;            ///< max - min
    double osc_sigma = 0;
    int newton_iters = 0;
    long linear_iters = 0;
};

double mass(const State& state, const SolverConfig& cfg);
double energy_intro(const State& state, const SolverConfig& cfg);
double energy_gamma(const State& state, const SolverConfig& cfg);

struct SteadyIndicators {
    double grad_mu_l2 = 0;
    double grad_sigma_l2 = 0;
    double reaction_l2 = 0;
    double steady_residual_u = 0;

    double max() const;
};

SteadyIndicators steady_indicators(const State& state, const SolverConfig& cfg);

/// Full record; prev (if non-null) adds the alpha |u_t|^2 dissipation term.
DiagnosticsRecord diagnostics(const State& state, const SolverConfig& cfg,
                              const State* prev = nullptr);

/// Discrete-in-time norms mirroring the first a-priori energy estimate:
/// L-infinity norms are maxima over snapshots, squared L2-in-time norms use
/// the trapezoid rule, u_t uses backward differences of consecutive states.
struct AprioriNormReport {
    double sqrt_alpha_mu_linf_h = 0;  ///< sqrt(alpha) * max_t ||mu||_{L2}
    double grad_mu_l2l2 = 0;          ///< (int_0^T ||grad mu||^2)^{1/2}
    double sqrt_alpha_ut_l2l2 = 0;    ///< sqrt(alpha) * (int_0^T ||u_t||^2)^{1/2}
    double u_linf_v = 0;              ///< max_t (||u||^2 + ||grad u||^2)^{1/2}
    double w_eps_u_linf_l1 = 0;       ///< max_t int W_eps(u)
    double sigma_linf_h = 0;          ///< max_t ||sigma||_{L2}
    double grad_sigma_l2l2 = 0;       ///< (int_0^T ||grad sigma||^2)^{1/2}
    // second-estimate-style norms, reported for trend logging only
    double mu_t_l2l2 = 0;             ///< (int_0^T ||mu_t||^2)^{1/2}
    double mu_l2v = 0;                ///< (int_0^T ||mu||_V^2)^{1/2}

    /// The entries bounded uniformly in alpha (no sqrt(alpha) weight).
    std::array<double, 5> alpha_uniform() const {
        return {grad_mu_l2l2, u_linf_v, w_eps_u_linf_l1, sigma_linf_h, grad_sigma_l2l2};
    }
};

/// Computes the report from a stored trajectory (>= 2 states, uniform spacing).
AprioriNormReport apriori_norm_report(std::span<const State> history, const SolverConfig& cfg);

/// Streaming accumulator equivalent to apriori_norm_report on the full history;
/// used by long runs that do not keep every state in memory.
class AprioriAccumulator {
  public:
    explicit AprioriAccumulator(const SolverConfig& cfg) : cfg_(cfg) {}
    void add(const State& state);
    AprioriNormReport report() const;
    std::size_t count() const { return count_; }

  private:
    SolverConfig cfg_;
    std::size_t count_ = 0;
    bool has_prev_ = false;
    State prev_;
    double prev_grad_mu_sq_ = 0, prev_grad_sigma_sq_ = 0, prev_mu_v_sq_ = 0;
    double max_mu_h_ = 0, max_u_v_sq_ = 0, max_w_l1_ = 0, max_sigma_h_ = 0;
    double int_grad_mu_ = 0, int_grad_sigma_ = 0, int_ut_ = 0, int_mut_ = 0, int_mu_v_ = 0;
};

} // namespace pftg

#endif
