"""Smoke tests for the pftg Python module (plain asserts, no test framework)."""
import math

import numpy as np

import pftg


def test_potentials():
    quartic = pftg.PotentialSpec(pftg.PotentialKind.Quartic, eps=0.01)
    assert abs(pftg.w_value(quartic, 0.0) - 0.25) < 1e-15
    assert pftg.w_value(quartic, 1.0) == 0.0
    obstacle = pftg.PotentialSpec(pftg.PotentialKind.DoubleObstacle, eps=0.1)
    assert math.isinf(pftg.w_value(obstacle, 2.0))
    assert abs(pftg.beta_eps(obstacle, 2.0) - 10.0) < 1e-12
    assert abs(pftg.beta_eps_moreau(obstacle, 2.0) - 5.0) < 1e-12


def test_grid_ops():
    grid = pftg.Grid(1, [32], [1.0])
    ones = np.ones(32)
    assert abs(pftg.integrate(grid, ones) - 1.0) < 1e-14
    assert np.max(np.abs(pftg.laplacian_neumann(grid, ones))) == 0.0
    rng = np.random.default_rng(0)
    f = rng.standard_normal(32)
    a, b = 2.0, 0.5
    rhs = a * f - b * pftg.laplacian_neumann(grid, f)
    rec = pftg.solve_helmholtz(grid, a, b, rhs, tol=1e-13)
    assert np.max(np.abs(rec - f)) < 1e-9


def test_stepping():
    grid = pftg.Grid(1, [32], [1.0])
    cfg = pftg.SolverConfig()
    cfg.alpha = 0.1
    cfg.gamma = 1.0
    cfg.potential = pftg.PotentialSpec(pftg.PotentialKind.Quartic, eps=0.01)
    cfg.proliferation = pftg.ProliferationSpec(pftg.ProliferationSpec.Kind.SqrtW, p0=1.0)
    cfg.dt = 1e-3

    state = pftg.State(grid)
    x = (np.arange(32) + 0.5) / 32.0
    state.u = np.tanh((x - 0.5) / 0.1)
    state.sigma = 0.5 * np.ones(32)

    m0 = pftg.mass(state, cfg)
    e0 = pftg.energy_gamma(state, cfg)
    for _ in range(50):
        state, stats = pftg.step_viscous(state, cfg)
    assert abs(pftg.mass(state, cfg) - m0) < 1e-9
    assert pftg.energy_gamma(state, cfg) < e0
    assert stats.final_residual <= cfg.tol_newton


def test_stationary():
    grid = pftg.Grid(1, [16], [1.0])
    quartic = pftg.PotentialSpec(pftg.PotentialKind.Quartic, eps=0.01)
    u = pftg.solve_stationary(0.0, quartic, grid, np.ones(16), tol=1e-11)
    assert np.max(np.abs(u - 1.0)) < 1e-10


def test_sweep_eps():
    obstacle = pftg.PotentialSpec(pftg.PotentialKind.DoubleObstacle, eps=0.1)
    rep = pftg.sweep_eps(obstacle, [0.2, 0.1, 0.05], [2.0])
    assert rep["monotone"] and rep["bounded"]
    assert abs(rep["moreau"][1][0] - 5.0) < 1e-12


def main():
    test_potentials()
    test_grid_ops()
    test_stepping()
    test_stationary()
    test_sweep_eps()
    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
