import math
import warnings

import numpy as np
import pytest

from papr_admm import admm
from papr_admm.admm import (AdmmState, SolverParams, Variant, augmented_lagrangian, beta_adapt,
                            beta_from_target, diagnose, dual_update, initial_state, iterate,
                            project_linf, solve, u_update, x_target)
from papr_admm.errors import DegenerateInputError, InputShapeError
from papr_admm.signal import OfdmConfig, random_symbol, synthesize, transform_count, papr_db

from conftest import crandn
from oracles import projected_gradient, radial_projection, rms_radius


def ofdm_symbol(rng, cfg=OfdmConfig()):
    _, s = random_symbol(rng, cfg)
    return synthesize(s, cfg)


# -- threshold ------------------------------------------------------------------

def test_beta_zero_db_on_unit_samples():
    assert beta_from_target(0.0, np.ones(4), 4) == pytest.approx(1.0)


def test_beta_six_db_doubles_rms():
    x = np.array([2.0, 0, 0, 0])  # ||x|| = 2, rms = 1
    assert beta_from_target(6.0206, x, 4) == pytest.approx(2.0, abs=1e-4)


def test_beta_matches_formula(rng):
    x = ofdm_symbol(rng)
    assert beta_from_target(4.0, x, 2048) == pytest.approx(rms_radius(4.0, x), rel=1e-14)


def test_beta_zero_signal_is_degenerate():
    with pytest.raises(DegenerateInputError):
        beta_from_target(4.0, np.zeros(8), 8)


def test_beta_adapt_follows_iterate():
    assert beta_adapt(np.full(4, 0.5), 0.0, 4) == pytest.approx(0.5)


# -- single steps -------------------------------------------------------------

def test_u_update_examples():
    z = np.zeros(4)
    np.testing.assert_allclose(u_update(z, z, z, 2.0), z)
    np.testing.assert_allclose(u_update(np.ones(4), z, z, 2.0), np.full(4, 2 / 3))


def test_u_update_zeroes_gradient(rng):
    n, rho = 8, 2.5
    x, y, xo = crandn(rng, n), crandn(rng, n), crandn(rng, n)
    u = u_update(x, y, xo, rho)

    def obj(v):
        r = x - xo - v
        return 0.5 * np.vdot(v, v).real + np.vdot(y, r).real + 0.5 * rho * np.vdot(r, r).real

    h = 1e-3
    grad = []
    for i in range(n):
        for d in (1, 1j):
            e = np.zeros(n, complex)
            e[i] = h * d
            grad.append((obj(u + e) - obj(u - e)) / (2 * h))
    assert np.linalg.norm(grad) <= 1e-10


def test_projection_examples():
    np.testing.assert_allclose(project_linf([3 + 4j], 1.0), [0.6 + 0.8j])
    v = np.array([0.5, -0.2j])
    np.testing.assert_array_equal(project_linf(v, 1.0), v)
    with pytest.raises(ValueError):
        project_linf(v, 0.0)


def test_projection_against_grid_search(rng):
    v = crandn(rng, 6, scale=2.0)
    beta = 1.0
    r = np.linspace(0, beta, 1501)
    th = np.linspace(-np.pi, np.pi, 3001)
    cand = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    best = np.array([cand[np.argmin(np.abs(cand - vi))] for vi in v])
    np.testing.assert_allclose(project_linf(v, beta), best, atol=2e-3)


def test_x_target_and_dual_examples():
    z = np.zeros(3)
    np.testing.assert_allclose(x_target(np.ones(3), 2 * np.ones(3), z, 2.0), z)
    np.testing.assert_allclose(dual_update(z, z, z, z, 2.0), z)
    np.testing.assert_allclose(dual_update(z, np.ones(3), z, z, 2.0), np.full(3, 2.0))


def test_lagrangian_term_by_term(rng):
    u, x, y, xo = (crandn(rng, 5) for _ in range(4))
    rho = 3.0
    ref = 0.0
    for i in range(5):
        r = x[i] - xo[i] - u[i]
        ref += 0.5 * abs(u[i]) ** 2 + (np.conj(y[i]) * r).real + 0.5 * rho * abs(r) ** 2
    assert augmented_lagrangian(u, x, y, xo, rho) == pytest.approx(ref, rel=1e-13)
    assert augmented_lagrangian(np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3), 2.0) == 0.0


# -- parameters -----------------------------------------------------------------

def test_small_rho_warns():
    with pytest.warns(UserWarning):
        SolverParams(rho=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SolverParams(rho=2.0)


def test_solve_rejects_bad_input():
    with pytest.raises(InputShapeError):
        solve(np.ones((2, 2)))
    with pytest.raises(DegenerateInputError):
        solve(np.zeros(8))


# -- full solver ------------------------------------------------------------------

def test_feasible_input_is_fixed_point():
    x_o = np.exp(1j * np.linspace(0, 6, 16))  # constant modulus, PAPR 0 dB
    res = solve(x_o, SolverParams(variant=Variant.T_ADMM, max_iters=10, eps_residual=0.0))
    np.testing.assert_allclose(res.x_final, x_o, atol=1e-14)
    assert np.max(res.residual_trace) <= 1e-14


@pytest.mark.parametrize("variant", list(Variant))
def test_traces_are_consistent(variant, rng):
    res = solve(ofdm_symbol(rng), SolverParams(variant=variant, max_iters=20, eps_residual=0.0))
    assert res.iters_run == 20
    for t in (res.feas_trace, res.lagrangian_trace, res.beta_trace, res.peak_trace):
        assert t.shape == res.residual_trace.shape
    assert np.all(res.peak_trace <= res.beta_trace + 1e-12)


def test_early_stop(rng):
    res = solve(ofdm_symbol(rng), SolverParams(variant=Variant.T_ADMM, max_iters=500, eps_residual=1e-6))
    assert res.iters_run < 500
    assert res.residual_trace[-1] <= 1e-6
    assert np.all(res.residual_trace[:-1] > 1e-6)


@pytest.mark.parametrize("variant", list(Variant))
def test_kernel_matches_reference_steps(variant, rng):
    x_o = ofdm_symbol(rng)
    params = SolverParams(variant=variant, max_iters=30, eps_residual=0.0)
    res = solve(x_o, params)
    states = list(iterate(x_o, params))
    last = states[-1]
    np.testing.assert_allclose(res.x_final, last.x, atol=1e-12)
    np.testing.assert_allclose(res.u_final, last.u, atol=1e-12)
    np.testing.assert_allclose(res.y_final, last.y, atol=1e-12)
    np.testing.assert_allclose(res.beta_trace, [s.beta for s in states[1:]], rtol=1e-12)
    lag = [augmented_lagrangian(s.u, s.x, s.y, x_o, params.rho) for s in states[1:]]
    np.testing.assert_allclose(res.lagrangian_trace, lag, rtol=1e-9, atol=1e-12)
    peaks = [np.max(np.abs(s.x)) for s in states[1:]]
    np.testing.assert_allclose(res.peak_trace, peaks, rtol=1e-12)


def test_t_admm_reaches_projected_gradient_optimum(rng):
    x_o = crandn(rng, 8)
    params = SolverParams(variant=Variant.T_ADMM, papr_target_db=3.0, max_iters=2000, eps_residual=0.0)
    res = solve(x_o, params)
    ref = projected_gradient(x_o, rms_radius(3.0, x_o))
    assert np.linalg.norm(res.x_final - ref) <= 1e-6
    assert np.linalg.norm(res.u_final - (ref - x_o)) <= 1e-6


def test_tcu_five_iterations_near_target(rng):
    params = SolverParams()
    hits = 0
    for _ in range(1000):
        x = solve(ofdm_symbol(rng), params).x_final
        hits += papr_db(x) <= params.papr_target_db + 0.5
    assert hits >= 990


def test_solver_performs_no_transforms(rng, monkeypatch):
    x_o = ofdm_symbol(rng)
    before = transform_count()

    def boom(*a, **k):
        raise AssertionError("transform called")

    monkeypatch.setattr("papr_admm.signal.dft", boom)
    for v in Variant:
        solve(x_o, SolverParams(variant=v, max_iters=50))
        list(iterate(x_o, SolverParams(variant=v), 5))
    assert transform_count() == before


# -- diagnostics ---------------------------------------------------------------------

def test_diagnose_stationary_trace():
    x_o = np.full(8, 0.3 + 0j)
    states = list(iterate(x_o, SolverParams(variant=Variant.T_ADMM), 4))
    rep = diagnose(states, x_o)
    assert len(rep) == 4
    for arr in (rep.delta_u, rep.delta_x, rep.delta_y, rep.descent):
        np.testing.assert_allclose(arr, 0.0, atol=1e-15)
    assert not any(f.any() for f in rep.flags.values())


def test_diagnose_needs_two_states():
    x_o = np.ones(4, complex)
    with pytest.raises(InputShapeError):
        diagnose([initial_state(x_o, SolverParams())], x_o)


def test_diagnose_closed_forms(rng):
    x_o = ofdm_symbol(rng)
    rho = 2.0
    params = SolverParams(variant=Variant.T_ADMM, rho=rho)
    states = list(iterate(x_o, params, 25))
    rep = diagnose(states, x_o)
    for k, (s0, s1) in enumerate(zip(states[:-1], states[1:])):
        du2 = np.linalg.norm(s0.u - s1.u) ** 2
        dy2 = np.linalg.norm(s0.y - s1.y) ** 2
        scale = rep.scale[k]
        # u-subproblem is (1+rho)-strongly convex and u^{k+1} is its minimizer
        assert rep.delta_u[k] == pytest.approx((1 + rho) / 2 * du2, abs=1e-10 * scale)
        # the dual ascent step raises L by exactly (1/rho)||dy||^2
        assert rep.delta_y[k] == pytest.approx(-dy2 / rho, abs=1e-10 * scale)
        assert rep.delta_y_claimed[k] == pytest.approx(dy2 / rho, abs=1e-10 * scale)
        np.testing.assert_allclose(s1.y, s1.u + rho * (s1.x - s0.x), atol=1e-12)
    for key in ("u_descent", "x_descent", "lagrangian_nonnegative", "lower_bound",
                "telescoping", "multiplier_identity"):
        assert not rep.flags[key].any(), key


def test_lagrangian_stays_nonnegative(rng):
    for rho in (2.0, 4.0):
        x_o = ofdm_symbol(rng)
        states = list(iterate(x_o, SolverParams(variant=Variant.T_ADMM, rho=rho), 40))
        lag = np.array([augmented_lagrangian(s.u, s.x, s.y, x_o, rho) for s in states[1:]])
        assert np.all(lag >= -1e-9)
