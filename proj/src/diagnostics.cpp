#include "pftg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pftg {

namespace {

Field reaction_field(const State& s, const SolverConfig& cfg) {
    Field R(s.grid());
    for (std::size_t i = 0; i < R.size(); ++i) {
        double p = p_value(cfg.proliferation, cfg.potential, s.u.values[i]);
        R.values[i] = p * (s.sigma.values[i] - cfg.gamma * s.mu.values[i]);
    }
    return R;
}

Field w_eps_field(const Field& u, const SolverConfig& cfg) {
    Field w(u.grid);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.values[i] = w_eps_value(cfg.potential, u.values[i]);
    return w;
}

double sq_l2(const Field& f) {
    double v = l2_norm(f);
    return v * v;
}

// shared by energy_intro / energy_gamma; they differ only in the sigma weight
double energy_core(const State& s, const SolverConfig& cfg, double sigma_coef) {
    Field musq(s.grid()), sigsq(s.grid());
    for (std::size_t i = 0; i < musq.size(); ++i) {
        musq.values[i] = s.mu.values[i] * s.mu.values[i];
        sigsq.values[i] = s.sigma.values[i] * s.sigma.values[i];
    }
    return 0.5 * grad_sq_integral(s.u) + integrate(w_eps_field(s.u, cfg)) +
           0.5 * cfg.alpha * integrate(musq) + sigma_coef * integrate(sigsq);
}

double oscillation(const Field& f) {
    auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    return *hi - *lo;
}

} // namespace

double mass(const State& state, const SolverConfig& cfg) {
    Field m(state.grid());
    for (std::size_t i = 0; i < m.size(); ++i)
        m.values[i] = cfg.alpha * state.mu.values[i] + state.u.values[i] + state.sigma.values[i];
    return integrate(m);
}

double energy_intro(const State& state, const SolverConfig& cfg) {
    return energy_core(state, cfg, 0.5);
}

double energy_gamma(const State& state, const SolverConfig& cfg) {
    return energy_core(state, cfg, 0.5 / cfg.gamma);
}

double SteadyIndicators::max() const {
    return std::max({grad_mu_l2, grad_sigma_l2, reaction_l2, steady_residual_u});
}

SteadyIndicators steady_indicators(const State& state, const SolverConfig& cfg) {
    SteadyIndicators ind;
    ind.grad_mu_l2 = std::sqrt(grad_sq_integral(state.mu));
    ind.grad_sigma_l2 = std::sqrt(grad_sq_integral(state.sigma));
    ind.reaction_l2 = l2_norm(reaction_field(state, cfg));
    double mu_s = mean(state.mu);
    Field lap_u = laplacian_neumann(state.u);
    Field res(state.grid());
    for (std::size_t i = 0; i < res.size(); ++i) {
        double u = state.u.values[i];
        res.values[i] = -lap_u.values[i] + beta_eps(cfg.potential, u) +
                        lambda_prime(cfg.potential, u) - mu_s;
    }
    ind.steady_residual_u = l2_norm(res);
    return ind;
}

DiagnosticsRecord diagnostics(const State& state, const SolverConfig& cfg, const State* prev) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass = mass(state, cfg);
    rec.energy_intro = energy_intro(state, cfg);
    rec.energy_gamma = energy_gamma(state, cfg);
    auto ind = steady_indicators(state, cfg);
    rec.grad_mu_l2 = ind.grad_mu_l2;
    rec.grad_sigma_l2 = ind.grad_sigma_l2;
    rec.reaction_l2 = ind.reaction_l2;
    rec.steady_residual_u = ind.steady_residual_u;
    rec.dissipation =
        grad_sq_integral(state.mu) + grad_sq_integral(state.sigma) / cfg.gamma;
    if (prev) {
        double dt = state.t - prev->t;
        if (dt > 0) {
            Field ut(state.grid());
            for (std::size_t i = 0; i < ut.size(); ++i)
                ut.values[i] = (state.u.values[i] - prev->u.values[i]) / dt;
            rec.dissipation += cfg.alpha * sq_l2(ut);
        }
    }
    rec.osc_mu = oscillation(state.mu);
    rec.osc_sigma = oscillation(state.sigma);
    return rec;
}

void AprioriAccumulator::add(const State& state) {
    double grad_mu_sq = grad_sq_integral(state.mu);
    double grad_sigma_sq = grad_sq_integral(state.sigma);
    double mu_v_sq = sq_l2(state.mu) + grad_mu_sq;
    max_mu_h_ = std::max(max_mu_h_, l2_norm(state.mu));
    max_sigma_h_ = std::max(max_sigma_h_, l2_norm(state.sigma));
    max_u_v_sq_ = std::max(max_u_v_sq_, sq_l2(state.u) + grad_sq_integral(state.u));
    max_w_l1_ = std::max(max_w_l1_, integrate(w_eps_field(state.u, cfg_)));
    if (has_prev_) {
        double dt = state.t - prev_.t;
        // trapezoid in time for the squared space-norm integrals
        int_grad_mu_ += 0.5 * dt * (prev_grad_mu_sq_ + grad_mu_sq);
        int_grad_sigma_ += 0.5 * dt * (prev_grad_sigma_sq_ + grad_sigma_sq);
        int_mu_v_ += 0.5 * dt * (prev_mu_v_sq_ + mu_v_sq);
        // backward-difference time derivatives live on the interval, not the nodes
        Field diff(state.grid());
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff.values[i] = (state.u.values[i] - prev_.u.values[i]) / dt;
        int_ut_ += dt * sq_l2(diff);
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff.values[i] = (state.mu.values[i] - prev_.mu.values[i]) / dt;
        int_mut_ += dt * sq_l2(diff);
    }
    prev_grad_mu_sq_ = grad_mu_sq;
    prev_grad_sigma_sq_ = grad_sigma_sq;
    prev_mu_v_sq_ = mu_v_sq;
    prev_ = state;
    has_prev_ = true;
    ++count_;
}

AprioriNormReport AprioriAccumulator::report() const {
    if (count_ < 2) throw InsufficientHistory("apriori norms need at least 2 states");
    AprioriNormReport r;
    double sa = std::sqrt(cfg_.alpha);
    r.sqrt_alpha_mu_linf_h = sa * max_mu_h_;
    r.grad_mu_l2l2 = std::sqrt(int_grad_mu_);
    r.sqrt_alpha_ut_l2l2 = sa * std::sqrt(int_ut_);
    r.u_linf_v = std::sqrt(max_u_v_sq_);
    r.w_eps_u_linf_l1 = max_w_l1_;
    r.sigma_linf_h = max_sigma_h_;
    r.grad_sigma_l2l2 = std::sqrt(int_grad_sigma_);
    r.mu_t_l2l2 = std::sqrt(int_mut_);
    r.mu_l2v = std::sqrt(int_mu_v_);
    return r;
}

AprioriNormReport apriori_norm_report(std::span<const State> history, const SolverConfig& cfg) {
    if (history.size() < 2) throw InsufficientHistory("apriori norms need at least 2 states");
    AprioriAccumulator acc(cfg);
    for (const State& s : history) acc.add(s);
    return acc.report();
}

} // namespace pftg
