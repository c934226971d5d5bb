#include <doctest.h>

#include <cmath>
#include <random>

#include "pftg/diagnostics.hpp"
#include "pftg/steady_state.hpp"
#include "pftg/stepper.hpp"
#include "support/oracles.hpp"

using namespace pftg;

namespace {

SolverConfig quartic_cfg(double alpha = 0.1) {
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = 1.0;
    cfg.potential = {PotentialKind::Quartic, 0.01, 0};
    cfg.proliferation = {ProliferationSpec::Kind::SqrtW, 0, 1.0};
    cfg.dt = 1e-3;
    cfg.tol_newton = 1e-12;
    cfg.tol_lin = 1e-13;
    return cfg;
}

State constant_state(const Grid& g, double mu, double u, double sigma) {
    State s(g);
    for (auto& v : s.mu.values) v = mu;
    for (auto& v : s.u.values) v = u;
    for (auto& v : s.sigma.values) v = sigma;
    return s;
}

State tanh_state(const Grid& g, double mu0, double sigma0) {
    State s(g);
    for (int i = 0; i < g.n[0]; ++i)
        s.u.values[i] = std::tanh((g.center(0, i) - 0.5) / 0.1);
    for (auto& v : s.mu.values) v = mu0;
    for (auto& v : s.sigma.values) v = sigma0;
    return s;
}

} // namespace

TEST_CASE("pure phase is a fixed point of both schemes") {
    Grid g = Grid::make(1, {16, 1, 1}, {1.0, 1, 1});
    State eq = constant_state(g, 0.0, 1.0, 0.0);
    for (bool limit : {false, true}) {
        SolverConfig cfg = quartic_cfg(limit ? 0.0 : 0.1);
        auto [next, stats] = limit ? step_limit(eq, cfg) : step_viscous(eq, cfg);
        CHECK(stats.newton_iters <= 1);
        for (std::size_t i = 0; i < next.u.size(); ++i) {
            CHECK(std::abs(next.mu.values[i]) <= 1e-10);
            CHECK(std::abs(next.u.values[i] - 1.0) <= 1e-10);
            CHECK(std::abs(next.sigma.values[i]) <= 1e-10);
        }
    }
}

TEST_CASE("spatially constant dynamics match the scalar backward-Euler oracle") {
    Grid g = Grid::make(1, {4, 1, 1}, {1.0, 1, 1});
    for (bool limit : {false, true}) {
        SolverConfig cfg = quartic_cfg(limit ? 0.0 : 0.1);
        State s = constant_state(g, 0.2, 0.3, 0.8);
        oracles::ScalarStep o{0.2, 0.3, 0.8};
        for (int k = 0; k < 100; ++k) {
            s = (limit ? step_limit(s, cfg) : step_viscous(s, cfg)).first;
            o = oracles::scalar_step(o, cfg.alpha, cfg.gamma, cfg.dt, cfg.potential,
                                     cfg.proliferation, limit);
            for (std::size_t i = 0; i < s.u.size(); ++i) {
                CHECK(std::abs(s.mu.values[i] - o.mu) <= 1e-10);
                CHECK(std::abs(s.u.values[i] - o.u) <= 1e-10);
                CHECK(std::abs(s.sigma.values[i] - o.sigma) <= 1e-10);
            }
        }
    }
}

TEST_CASE("mass is conserved along a run") {
    Grid g = Grid::make(1, {32, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.tol_newton = 1e-10;
    cfg.tol_lin = 1e-11;
    State s = tanh_state(g, 0.0, 0.5);
    const double m0 = mass(s, cfg);
    const int steps = 200;
    double worst = 0;
    for (int k = 0; k < steps; ++k) {
        s = step_viscous(s, cfg).first;
        worst = std::max(worst, std::abs(mass(s, cfg) - m0));
    }
    CHECK(worst <= 100.0 * steps * cfg.tol_lin * (1 + std::abs(m0)));
    // per-step bound from the scheme structure
    CHECK(worst <= 100.0 * cfg.tol_lin * (1 + std::abs(m0)) * steps);
}

TEST_CASE("energy decay within slack on the relaxation scenario") {
    Grid g = Grid::make(1, {32, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    State s = tanh_state(g, 0.0, 0.5);
    double e_prev = energy_gamma(s, cfg);
    const double slack = std::max(1e-10, 5 * cfg.dt * cfg.dt * std::abs(e_prev));
    int violations = 0;
    const int steps = 300;
    for (int k = 0; k < steps; ++k) {
        s = step_viscous(s, cfg).first;
        double e = energy_gamma(s, cfg);
        if (e > e_prev + slack) ++violations;
        e_prev = e;
    }
    CHECK(violations <= steps / 100);
}

TEST_CASE("newton_solve: zero-residual guess returns immediately") {
    Grid g = Grid::make(1, {8, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    State eq = constant_state(g, 0.0, 1.0, 0.0);
    auto [next, stats] = newton_solve(eq, cfg, Scheme::Viscous);
    CHECK(stats.newton_iters <= 1);
    auto [next2, stats2] = newton_solve(next, cfg, Scheme::Viscous);
    CHECK(stats2.newton_iters == 0); // warm start at the solution
    CHECK(stats2.linear_iters == 0);
}

TEST_CASE("newton iterates reduce to the scalar system on constant fields") {
    Grid g = Grid::make(1, {2, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.dt = 0.05; // larger step so Newton takes a few iterations
    cfg.tol_newton = 1e-12;
    State s = constant_state(g, 0.1, 0.4, 0.9);
    auto [next, stats] = step_viscous(s, cfg);
    oracles::ScalarStep o = oracles::scalar_step({0.1, 0.4, 0.9}, cfg.alpha, cfg.gamma, cfg.dt,
                                                 cfg.potential, cfg.proliferation, false, 1e-12);
    CHECK(std::abs(next.mu.values[0] - o.mu) <= 1e-12);
    CHECK(std::abs(next.u.values[0] - o.u) <= 1e-12);
    CHECK(std::abs(next.sigma.values[0] - o.sigma) <= 1e-12);
    CHECK(next.u.values[0] == next.u.values[1]); // stays exactly constant in space
}

TEST_CASE("newton convergence is quadratic near the solution") {
    Grid g = Grid::make(1, {24, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.dt = 0.2; // big step forces several iterations
    cfg.tol_newton = 1e-13;
    State s = tanh_state(g, 0.0, 0.5);
    auto [next, stats] = step_viscous(s, cfg);
    REQUIRE(stats.residual_history.size() >= 3);
    const auto& h = stats.residual_history;
    double rk = h[h.size() - 1], rk1 = h[h.size() - 2];
    double C = rk / (rk1 * rk1);
    CHECK(std::isfinite(C));
    MESSAGE("observed quadratic-convergence constant C = ", C);
}

TEST_CASE("halving dt halves or better the terminal difference") {
    Grid g = Grid::make(1, {32, 1, 1}, {1.0, 1, 1});
    const double T = 0.1;
    auto run = [&](double dt) {
        SolverConfig cfg = quartic_cfg();
        cfg.dt = dt;
        State s = tanh_state(g, 0.0, 0.5);
        long n = std::lround(T / dt);
        for (long k = 0; k < n; ++k) s = step_viscous(s, cfg).first;
        return s;
    };
    State ref = run(5e-4);         // tau/8 reference
    State coarse = run(4e-3);      // tau
    State fine = run(2e-3);        // tau/2
    auto diff = [&](const State& a, const State& b) {
        Field d(g);
        for (std::size_t i = 0; i < d.size(); ++i) d.values[i] = a.u.values[i] - b.u.values[i];
        return l2_norm(d);
    };
    double e_coarse = diff(coarse, ref);
    double e_fine = diff(fine, ref);
    CHECK(e_fine <= 0.5 * e_coarse * (1 + 0.05));
}

TEST_CASE("stationary profiles with zero reaction are fixed points") {
    Grid g = Grid::make(1, {32, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    const double mu_s = 0.05;
    StationaryProblem prob;
    prob.mu_s = mu_s;
    prob.potential = cfg.potential;
    prob.grid = g;
    prob.initial_guess = tanh_state(g, 0, 0).u;
    Field u = solve_stationary(prob, 1e-12);

    State s(g);
    s.u = u;
    for (auto& v : s.mu.values) v = mu_s;
    for (auto& v : s.sigma.values) v = cfg.gamma * mu_s; // reaction vanishes pointwise
    auto [next, stats] = step_viscous(s, cfg);
    Field du(g);
    for (std::size_t i = 0; i < du.size(); ++i) du.values[i] = next.u.values[i] - s.u.values[i];
    CHECK(max_abs(du) <= 1e-8);
}

TEST_CASE("divergence reporting and precondition checks") {
    Grid g = Grid::make(1, {8, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.tol_newton = 1e-30; // unreachable
    cfg.max_newton = 3;
    State s = tanh_state(g, 0.0, 0.5);
    CHECK_THROWS_AS((void)step_viscous(s, cfg), NewtonDivergence);

    SolverConfig bad = quartic_cfg(0.0);
    CHECK_THROWS_AS((void)step_viscous(s, bad), ValidationError);
    SolverConfig bad2 = quartic_cfg(0.1);
    CHECK_THROWS_AS((void)step_limit(s, bad2), ValidationError);
    SolverConfig bad3 = quartic_cfg(0.0);
    bad3.potential.kind = PotentialKind::DoubleObstacle;
    CHECK_THROWS_AS((void)step_limit(s, bad3), UnsupportedPotential);
}

TEST_CASE("both linear paths produce the same trajectory") {
    // n = 48 puts the laplacian rounding floor near 3e-12; tolerances sit above it
    Grid g = Grid::make(1, {48, 1, 1}, {1.0, 1, 1});
    SolverConfig cg = quartic_cfg();
    cg.tol_newton = 1e-10;
    cg.tol_lin = 1e-12;
    SolverConfig ct = cg;
    ct.solver_kind = LinearMethod::CosineTransform;
    State a = tanh_state(g, 0.0, 0.5), b = a;
    long it_cg = 0, it_ct = 0;
    for (int k = 0; k < 30; ++k) {
        auto [na, sa] = step_viscous(a, cg);
        auto [nb, sb] = step_viscous(b, ct);
        it_cg += sa.linear_iters;
        it_ct += sb.linear_iters;
        a = std::move(na);
        b = std::move(nb);
    }
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        CHECK(std::abs(a.mu.values[i] - b.mu.values[i]) <= 1e-8);
        CHECK(std::abs(a.u.values[i] - b.u.values[i]) <= 1e-8);
        CHECK(std::abs(a.sigma.values[i] - b.sigma.values[i]) <= 1e-8);
    }
    MESSAGE("linear iterations, jacobi: ", it_cg, ", transform: ", it_ct);
}

TEST_CASE("2d stepping conserves mass and dissipates energy") {
    Grid g = Grid::make(2, {16, 12, 1}, {1.0, 0.75, 1});
    SolverConfig cfg = quartic_cfg();
    State s(g);
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i)
            s.u.values[g.index(i, j)] =
                std::tanh((g.center(0, i) - 0.5) / 0.15) * std::cos(2.0 * g.center(1, j));
    for (auto& v : s.sigma.values) v = 0.5;
    const double m0 = mass(s, cfg);
    double e_prev = energy_gamma(s, cfg);
    const double slack = std::max(1e-10, 5 * cfg.dt * cfg.dt * std::abs(e_prev));
    int violations = 0;
    for (int k = 0; k < 40; ++k) {
        s = step_viscous(s, cfg).first;
        double e = energy_gamma(s, cfg);
        if (e > e_prev + slack) ++violations;
        e_prev = e;
    }
    CHECK(std::abs(mass(s, cfg) - m0) <= 1e-9);
    CHECK(violations == 0);
}

TEST_CASE("logarithmic potential stepping stays inside the open interval") {
    Grid g = Grid::make(1, {24, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.potential = {PotentialKind::Logarithmic, 0.05, 1.5};
    cfg.proliferation = {ProliferationSpec::Kind::Constant, 0.4, 1.0};
    State s = tanh_state(g, 0.0, 0.5);
    for (double& v : s.u.values) v *= 0.9; // strictly inside (-1,1)
    const double m0 = mass(s, cfg);
    for (int k = 0; k < 80; ++k) s = step_viscous(s, cfg).first;
    CHECK(max_abs(s.u) < 1.0);
    CHECK(std::abs(mass(s, cfg) - m0) <= 1e-9);
}

TEST_CASE("double-obstacle stepping stays within the collar") {
    Grid g = Grid::make(1, {24, 1, 1}, {1.0, 1, 1});
    SolverConfig cfg = quartic_cfg();
    cfg.potential = {PotentialKind::DoubleObstacle, 0.01, 0};
    cfg.proliferation = {ProliferationSpec::Kind::SqrtW, 0, 1.0};
    State s = tanh_state(g, 0.0, 0.5);
    for (int k = 0; k < 100; ++k) s = step_viscous(s, cfg).first;
    double overshoot = 0;
    for (double u : s.u.values) overshoot = std::max(overshoot, std::abs(u) - 1.0);
    CHECK(overshoot <= 10 * cfg.potential.eps);
}
