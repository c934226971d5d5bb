#include "pftg/steady_state.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "pftg/linear.hpp"

namespace pftg {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// distance of val from beta(u) for the unregularized graph
double graph_distance(const PotentialSpec& spec, double u, double val) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (spec.kind) {
    case PotentialKind::Quartic: {
        double b = std::abs(u) >= 1.0 ? u * (u * u - 1.0) : 0.0;
        return std::abs(val - b);
    }
    case PotentialKind::Logarithmic:
        if (std::abs(u) >= 1.0) return inf; // beta(u) empty at and beyond +-1
        return std::abs(val - std::log((1.0 + u) / (1.0 - u)));
    case PotentialKind::DoubleObstacle:
        if (u > 1.0 || u < -1.0) return inf;
        if (u == 1.0) return val >= 0 ? 0.0 : -val;  // beta(1) = [0, inf)
        if (u == -1.0) return val <= 0 ? 0.0 : val;  // beta(-1) = (-inf, 0]
        return std::abs(val);
    }
    return inf;
}

} // namespace

std::string to_string(OmegaBranch b) {
    switch (b) {
    case OmegaBranch::Mixed: return "mixed";
    case OmegaBranch::PurePlus: return "pure_plus";
    case OmegaBranch::PureMinus: return "pure_minus";
    case OmegaBranch::NotSteady: return "not_steady";
    }
    return "?";
}

Field solve_stationary(const StationaryProblem& prob, double tol) {
    if (!(tol > 0)) throw ValidationError("solve_stationary requires tol > 0");
    prob.potential.validate();
    const Grid& g = prob.grid;
    if (!(prob.initial_guess.grid == g))
        throw GridMismatch("initial guess lives on a different grid");
    const std::size_t n = g.total_cells();
    std::vector<double> u = prob.initial_guess.values;

    auto residual = [&](const std::vector<double>& uu, std::vector<double>& f) {
        Field uf(g);
        uf.values = uu;
        Field lap = laplacian_neumann(uf);
        f.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = -lap.values[i] + beta_eps(prob.potential, uu[i]) +
                   lambda_prime(prob.potential, uu[i]) - prob.mu_s;
    };

    std::vector<double> f(n), dx(n), u_trial(n), f_trial(n), diag_u(n);
    residual(u, f);
    double fnorm = inf_norm(f);
    const int max_newton = 100;
    const long max_lin = 20 * long(n);

    for (int it = 0; fnorm > tol; ++it) {
        if (it >= max_newton) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", fnorm);
            throw NewtonDivergence(std::string("stationary Newton stalled at residual ") + buf);
        }
        for (std::size_t i = 0; i < n; ++i)
            diag_u[i] = beta_eps_prime(prob.potential, u[i]) + lambda_second(prob.potential, u[i]);
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            Field inf_(g);
            inf_.values = in;
            Field lap = laplacian_neumann(inf_);
            out.resize(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = -lap.values[i] + diag_u[i] * in[i];
        };
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];
        // the linearization may be indefinite (lambda'' < 0); BiCGStab handles it
        auto res = bicgstab_solve(apply, rhs, dx, Precond{}, 1e-2 * tol / (1.0 + fnorm), max_lin);
        if (!res.converged && res.residual > 0.1 * norm2(rhs))
            throw SingularSystem("stationary linearization solve stalled");
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 10; ++halving) {
            for (std::size_t i = 0; i < n; ++i) u_trial[i] = u[i] + lambda * dx[i];
            residual(u_trial, f_trial);
            double tnorm = inf_norm(f_trial);
            if (std::isfinite(tnorm) && tnorm < fnorm) {
                accepted = true;
                fnorm = tnorm;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) throw NewtonDivergence("stationary Newton damping failed");
        u.swap(u_trial);
        f.swap(f_trial);
    }
    Field out(g);
    out.values = std::move(u);
    return out;
}

double steady_residual_graph(const State& state, const SolverConfig& cfg) {
    double mu_s = mean(state.mu);
    Field lap_u = laplacian_neumann(state.u);
    Field res(state.grid());
    for (std::size_t i = 0; i < res.size(); ++i) {
        double u = state.u.values[i];
        double val = mu_s + lap_u.values[i] - lambda_prime(cfg.potential, u);
        res.values[i] = graph_distance(cfg.potential, u, val);
    }
    return l2_norm(res);
}

OmegaClassification classify_omega(const State& state, const SolverConfig& cfg, double tol) {
    OmegaClassification out;
    auto ind = steady_indicators(state, cfg);
    double stationarity = std::min(ind.steady_residual_u, steady_residual_graph(state, cfg));
    bool steady = ind.grad_mu_l2 <= tol && ind.grad_sigma_l2 <= tol && ind.reaction_l2 <= tol &&
                  stationarity <= tol;
    if (!steady) {
        out.branch = OmegaBranch::NotSteady;
        return out;
    }
    const double collar = 10.0 * cfg.potential.eps + tol;
    double dev_plus = 0, dev_minus = 0;
    for (double u : state.u.values) {
        dev_plus = std::max(dev_plus, std::abs(u - 1.0));
        dev_minus = std::max(dev_minus, std::abs(u + 1.0));
    }
    out.mixed_defect = std::abs(mean(state.sigma) - cfg.gamma * mean(state.mu));
    if (dev_plus <= collar)
        out.branch = OmegaBranch::PurePlus;
    else if (dev_minus <= collar)
        out.branch = OmegaBranch::PureMinus;
    else
        out.branch = OmegaBranch::Mixed;
    return out;
}

bool is_steady(const State& state, const State* prev, const SolverConfig& cfg,
               const SteadyThresholds& th) {
    auto ind = steady_indicators(state, cfg);
    if (ind.grad_mu_l2 > th.grad_mu || ind.grad_sigma_l2 > th.grad_sigma ||
        ind.reaction_l2 > th.reaction || ind.steady_residual_u > th.steady_residual)
        return false;
    if (prev) {
        double dt = state.t - prev->t;
        if (dt <= 0) return false;
        Field d(state.grid());
        double rate = 0;
        auto field_rate = [&](const Field& a, const Field& b) {
            for (std::size_t i = 0; i < d.size(); ++i) d.values[i] = (a.values[i] - b.values[i]) / dt;
            return l2_norm(d);
        };
        rate = std::max({field_rate(state.mu, prev->mu), field_rate(state.u, prev->u),
                         field_rate(state.sigma, prev->sigma)});
        if (rate > th.increment_rate) return false;
    }
    return true;
}

std::optional<std::size_t> detect_convergence(std::span<const State> history,
                                              const SolverConfig& cfg,
                                              const SteadyThresholds& th) {
    for (std::size_t i = 0; i < history.size(); ++i) {
        const State* prev = i > 0 ? &history[i - 1] : nullptr;
        if (is_steady(history[i], prev, cfg, th)) return i;
    }
    return std::nullopt;
}

} // namespace pftg
