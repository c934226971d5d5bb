#include "pftg/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "pftg/linear.hpp"

namespace pftg {

void SolverConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in [0,1)");
    if (!(gamma > 0)) throw ValidationError("gamma must be > 0");
    if (!(dt > 0)) throw ValidationError("dt must be > 0");
    if (!(tol_newton > 0)) throw ValidationError("tol_newton must be > 0");
    if (!(tol_lin > 0)) throw ValidationError("tol_lin must be > 0");
    if (max_newton < 1) throw ValidationError("max_newton must be >= 1");
    potential.validate();
    proliferation.validate();
}

void State::check_consistent() const {
    if (!(mu.grid == u.grid) || !(sigma.grid == u.grid))
        throw ValidationError("state fields must share one grid");
}

namespace {

struct Unknowns {
    // stacked (mu, u, sigma) coefficient vector views
    std::size_t n;
    static void split(const std::vector<double>& x, Field& mu, Field& u, Field& sigma) {
        std::size_t n = mu.size();
        for (std::size_t i = 0; i < n; ++i) {
            mu.values[i] = x[i];
            u.values[i] = x[n + i];
            sigma.values[i] = x[2 * n + i];
        }
    }
    static void join(const Field& mu, const Field& u, const Field& sigma, std::vector<double>& x) {
        std::size_t n = mu.size();
        x.resize(3 * n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = mu.values[i];
            x[n + i] = u.values[i];
            x[2 * n + i] = sigma.values[i];
        }
    }
};

double inf_norm(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Frozen per-step data: p(u^n) and lambda'(u^n).
struct FrozenTerms {
    Field p_n, lambda_n;
};

class StepSystem {
  public:
    StepSystem(const State& prev, const SolverConfig& cfg, Scheme scheme)
        : prev_(prev), cfg_(cfg), scheme_(scheme), grid_(prev.grid()), n_(prev.u.size()),
          frozen_{Field(grid_), Field(grid_)} {
        for (std::size_t i = 0; i < n_; ++i) {
            frozen_.p_n.values[i] = p_value(cfg.proliferation, cfg.potential, prev.u.values[i]);
            frozen_.lambda_n.values[i] =
                scheme == Scheme::Viscous ? lambda_prime(cfg.potential, prev.u.values[i])
                                          : -prev.u.values[i]; // explicit concave part of r^3 - r
        }
    }

    void residual(const std::vector<double>& x, std::vector<double>& f) const {
        Field mu(grid_), u(grid_), sigma(grid_);
        Unknowns::split(x, mu, u, sigma);
        Field lap_mu = laplacian_neumann(mu);
        Field lap_u = laplacian_neumann(u);
        Field lap_sigma = laplacian_neumann(sigma);
        f.resize(3 * n_);
        const double inv_dt = 1.0 / cfg_.dt;
        for (std::size_t i = 0; i < n_; ++i) {
            double R = frozen_.p_n.values[i] * (sigma.values[i] - cfg_.gamma * mu.values[i]);
            double du = (u.values[i] - prev_.u.values[i]) * inv_dt;
            f[i] = cfg_.alpha * (mu.values[i] - prev_.mu.values[i]) * inv_dt + du -
                   lap_mu.values[i] - R;
            double nonlin = scheme_ == Scheme::Viscous
                                ? beta_eps(cfg_.potential, u.values[i])
                                : u.values[i] * u.values[i] * u.values[i];
            f[n_ + i] = -mu.values[i] + cfg_.alpha * du - lap_u.values[i] + nonlin +
                        frozen_.lambda_n.values[i];
            f[2 * n_ + i] = (sigma.values[i] - prev_.sigma.values[i]) * inv_dt -
                            lap_sigma.values[i] + R;
        }
    }

    // Jacobian at the current iterate; only the u-diagonal depends on it.
    void set_linearization_point(const std::vector<double>& x) {
        diag_u_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double u = x[n_ + i];
            diag_u_[i] = scheme_ == Scheme::Viscous ? beta_eps_prime(cfg_.potential, u)
                                                    : 3.0 * u * u;
        }
    }

    void jacobian_apply(const std::vector<double>& dx, std::vector<double>& out) const {
        Field dmu(grid_), du(grid_), dsigma(grid_);
        Unknowns::split(dx, dmu, du, dsigma);
        Field lap_dmu = laplacian_neumann(dmu);
        Field lap_du = laplacian_neumann(du);
        Field lap_dsigma = laplacian_neumann(dsigma);
        out.resize(3 * n_);
        const double inv_dt = 1.0 / cfg_.dt;
        for (std::size_t i = 0; i < n_; ++i) {
            double p = frozen_.p_n.values[i];
            double dR = p * (dsigma.values[i] - cfg_.gamma * dmu.values[i]);
            out[i] = cfg_.alpha * inv_dt * dmu.values[i] + inv_dt * du.values[i] -
                     lap_dmu.values[i] - dR;
            out[n_ + i] = -dmu.values[i] + cfg_.alpha * inv_dt * du.values[i] -
                          lap_du.values[i] + diag_u_[i] * du.values[i];
            out[2 * n_ + i] = inv_dt * dsigma.values[i] - lap_dsigma.values[i] + dR;
        }
    }

    // Block-triangular preconditioner built from constant-coefficient Helmholtz
    // inversions (cosine-transform diagonalization). The spatially varying
    // reaction and monotone diagonals enter through their means; the
    // chemical-potential row is then recovered exactly from the u increment.
    Precond transform_preconditioner() const {
        double p_bar = 0, beta_bar = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            p_bar += frozen_.p_n.values[i];
            beta_bar += diag_u_[i];
        }
        p_bar /= double(n_);
        beta_bar /= double(n_);
        const double inv_dt = 1.0 / cfg_.dt;
        double shift_mu = cfg_.alpha * inv_dt + cfg_.gamma * p_bar;
        if (shift_mu < 1e-8) shift_mu = 1.0; // keep the solve nonsingular at alpha = 0
        double shift_u = cfg_.alpha * inv_dt + beta_bar;
        if (shift_u < 1e-8) shift_u = 1.0;
        const double shift_sigma = inv_dt + p_bar;

        return [this, shift_mu, shift_u, shift_sigma,
                inv_dt](const std::vector<double>& r, std::vector<double>& z) {
            HelmholtzOptions opts;
            opts.method = LinearMethod::CosineTransform;
            Field r1(grid_), r2(grid_), r3(grid_);
            Unknowns::split(r, r1, r2, r3);
            Field t1 = solve_helmholtz(grid_, shift_mu, 1.0, r1, opts);
            for (std::size_t i = 0; i < n_; ++i) t1.values[i] += r2.values[i];
            Field du = solve_helmholtz(grid_, shift_u, 1.0, t1, opts);
            Field lap_du = laplacian_neumann(du);
            Field dmu(grid_), rhs3(grid_);
            for (std::size_t i = 0; i < n_; ++i) {
                dmu.values[i] = cfg_.alpha * inv_dt * du.values[i] - lap_du.values[i] +
                                diag_u_[i] * du.values[i] - r2.values[i];
                rhs3.values[i] =
                    r3.values[i] + cfg_.gamma * frozen_.p_n.values[i] * dmu.values[i];
            }
            Field ds = solve_helmholtz(grid_, shift_sigma, 1.0, rhs3, opts);
            Unknowns::join(dmu, du, ds, z);
        };
    }

    std::vector<double> jacobi_diagonal() const {
        std::vector<double> d(3 * n_);
        const double inv_dt = 1.0 / cfg_.dt;
        for (int k = 0; k < grid_.n[2]; ++k)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int i = 0; i < grid_.n[0]; ++i) {
                    std::array<int, 3> idx{i, j, k};
                    double lap_diag = 0;
                    for (int ax = 0; ax < grid_.dim; ++ax) {
                        int faces = (idx[ax] > 0 ? 1 : 0) + (idx[ax] + 1 < grid_.n[ax] ? 1 : 0);
                        lap_diag += faces / (grid_.h[ax] * grid_.h[ax]);
                    }
                    std::size_t c = grid_.index(i, j, k);
                    double p = frozen_.p_n.values[c];
                    d[c] = cfg_.alpha * inv_dt + lap_diag + cfg_.gamma * p;
                    d[n_ + c] = cfg_.alpha * inv_dt + lap_diag + diag_u_[c];
                    d[2 * n_ + c] = inv_dt + lap_diag + p;
                }
        // guard against zero diagonals (alpha = 0 with constant-free u rows)
        for (double& v : d)
            if (v <= 0) v = 1;
        return d;
    }

    const Field& frozen_p() const { return frozen_.p_n; }

  private:
    const State& prev_;
    const SolverConfig& cfg_;
    Scheme scheme_;
    Grid grid_;
    std::size_t n_;
    FrozenTerms frozen_;
    std::vector<double> diag_u_;
};

} // namespace

void scheme_residual(const State& prev, const State& next, const SolverConfig& cfg, Scheme scheme,
                     Field& r1, Field& r2, Field& r3) {
    StepSystem sys(prev, cfg, scheme);
    std::vector<double> x, f;
    Unknowns::join(next.mu, next.u, next.sigma, x);
    sys.residual(x, f);
    const Grid& g = prev.grid();
    r1 = Field(g);
    r2 = Field(g);
    r3 = Field(g);
    std::size_t n = g.total_cells();
    for (std::size_t i = 0; i < n; ++i) {
        r1.values[i] = f[i];
        r2.values[i] = f[n + i];
        r3.values[i] = f[2 * n + i];
    }
}

std::pair<State, StepStats> newton_solve(const State& state, const SolverConfig& cfg,
                                         Scheme scheme) {
    state.check_consistent();
    StepSystem sys(state, cfg, scheme);
    const std::size_t n3 = 3 * state.u.size();

    std::vector<double> x, f(n3), dx(n3), x_trial(n3), f_trial(n3);
    Unknowns::join(state.mu, state.u, state.sigma, x);
    sys.residual(x, f);
    double fnorm = inf_norm(f);

    StepStats stats;
    stats.residual_history.push_back(fnorm);
    const long max_lin = 10 * long(n3);

    while (fnorm > cfg.tol_newton) {
        if (stats.newton_iters >= cfg.max_newton)
            throw NewtonDivergence("Newton residual " + fmt_sci(fnorm) + " above " +
                                   fmt_sci(cfg.tol_newton) + " after " +
                                   std::to_string(stats.newton_iters) + " iterations");
        sys.set_linearization_point(x);
        std::vector<double> rhs(n3);
        for (std::size_t i = 0; i < n3; ++i) rhs[i] = -f[i];
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            sys.jacobian_apply(in, out);
        };
        std::vector<double> diag;
        Precond pc;
        if (cfg.solver_kind == LinearMethod::CosineTransform) {
            pc = sys.transform_preconditioner();
        } else {
            diag = sys.jacobi_diagonal();
            pc = [&diag](const std::vector<double>& r, std::vector<double>& zz) {
                zz.resize(r.size());
                for (std::size_t i = 0; i < r.size(); ++i) zz[i] = r[i] / diag[i];
            };
        }
        auto res = bicgstab_solve(apply, rhs, dx, pc, cfg.tol_lin, max_lin);
        stats.linear_iters += res.iterations;
        if (!res.converged)
            throw SingularSystem("Newton linearization solve stalled at relative residual " +
                                 fmt_sci(res.residual / (norm2(rhs) + 1e-300)));

        // damping by halving while the residual fails to decrease
        double lambda = 1.0;
        double best_norm = fnorm;
        bool accepted = false;
        for (int halving = 0; halving <= 10; ++halving) {
            for (std::size_t i = 0; i < n3; ++i) x_trial[i] = x[i] + lambda * dx[i];
            sys.residual(x_trial, f_trial);
            double tnorm = all_finite(f_trial) ? inf_norm(f_trial)
                                               : std::numeric_limits<double>::infinity();
            if (tnorm < best_norm) {
                accepted = true;
                best_norm = tnorm;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergence("Newton damping failed to reduce the residual below " +
                                   fmt_sci(fnorm));
        x.swap(x_trial);
        f.swap(f_trial);
        fnorm = best_norm;
        ++stats.newton_iters;
        stats.residual_history.push_back(fnorm);
    }

    State out(state.grid(), state.t + cfg.dt);
    Unknowns::split(x, out.mu, out.u, out.sigma);
    stats.final_residual = fnorm;
    return {std::move(out), std::move(stats)};
}

std::pair<State, StepStats> step_viscous(const State& state, const SolverConfig& cfg) {
    if (!(cfg.alpha > 0)) throw ValidationError("step_viscous requires alpha > 0");
    return newton_solve(state, cfg, Scheme::Viscous);
}

std::pair<State, StepStats> step_limit(const State& state, const SolverConfig& cfg) {
    if (cfg.alpha != 0) throw ValidationError("step_limit requires alpha = 0");
    if (cfg.potential.kind != PotentialKind::Quartic)
        throw UnsupportedPotential("step_limit requires the quartic potential");
    return newton_solve(state, cfg, Scheme::Limit);
}

} // namespace pftg
