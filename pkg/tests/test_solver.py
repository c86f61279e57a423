import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ekfrac.errors import ParameterError, SingularSystemError
from ekfrac.hermite import project, stiffness
from ekfrac.operators import OperatorParams, SampleSeries, apply_G, integral_weights
from ekfrac.solver import (
    STABILITY_FACTOR,
    SolverConfig,
    assemble_system,
    initial_state,
    march,
    run,
    solve_banded_spd,
    step,
)
from ekfrac.studies import StudySpec, solver_convergence_study


def gauss(x):
    return np.exp(-x * x / 2)


def random_banded_spd(rng, m):
    S = stiffness(m - 1).matrix()
    shift = rng.uniform(0.1, 3.0)
    return np.eye(m) + shift * S


class TestConfig:
    def test_tau(self):
        c = SolverConfig(OperatorParams(0.5, 0.5), 4, 8, T=2.0)
        assert c.tau == 0.25

    @pytest.mark.parametrize("kw", [{"N": -1}, {"n_steps": 0}, {"T": 0.0}])
    def test_rejects(self, kw):
        base = dict(params=OperatorParams(0.5, 0.5), N=4, n_steps=8)
        base.update(kw)
        with pytest.raises(ParameterError):
            SolverConfig(**base)


class TestBandedSolve:
    def test_identity(self, rng):
        b = rng.standard_normal(9)
        np.testing.assert_array_equal(solve_banded_spd(np.eye(9), b), b)

    @pytest.mark.parametrize("m", [1, 2, 3, 21])
    def test_residual_and_dense(self, rng, m):
        A = random_banded_spd(rng, m)
        b = rng.standard_normal(m)
        x = solve_banded_spd(A, b)
        assert np.linalg.norm(A @ x - b) <= 1e-12 * np.linalg.norm(b)
        np.testing.assert_allclose(x, np.linalg.solve(A, b), atol=1e-12)

    def test_rejects_other_structure(self, rng):
        A = random_banded_spd(rng, 6)
        A[0, 1] = A[1, 0] = 0.1
        with pytest.raises(ParameterError):
            solve_banded_spd(A, np.ones(6))
        A = random_banded_spd(rng, 6)
        A[0, 2] += 0.1
        with pytest.raises(ParameterError):
            solve_banded_spd(A, np.ones(6))
        with pytest.raises(ParameterError):
            solve_banded_spd(np.eye(3), np.ones(4))

    def test_not_positive_definite(self):
        A = np.eye(5) - 3.0 * stiffness(4).matrix()
        with pytest.raises(SingularSystemError):
            solve_banded_spd(A, np.ones(5))


def _state_after(config, gamma0, steps):
    basis = stiffness(config.N)
    state = initial_state(gamma0, capacity=2)
    for _ in range(steps):
        step(state, config, basis)
    return state, basis


class TestAssembly:
    def test_first_step(self):
        p = OperatorParams(0.7, 0.15)
        g0 = np.arange(1.0, 7.0)
        state = initial_state(g0)
        basis = stiffness(5)
        w1, w0 = integral_weights(p, 1), integral_weights(p, 0)
        A, b = assemble_system(p, 1, 0.1, basis, w1, w0, state)
        np.testing.assert_array_equal(b, g0)
        shift = (0.7 * 0.1 * 0.1 ** (-0.3) + 0.1**0.7) * w1.c[0]
        np.testing.assert_allclose(np.diag(A), 1 + shift * (np.arange(6) + 0.5), rtol=1e-15)
        assert np.all(np.diag(A) > 1)

    def test_rejects_wrong_step(self):
        p = OperatorParams(0.5, 0.5)
        state = initial_state(np.ones(4))
        with pytest.raises(ParameterError):
            assemble_system(p, 2, 0.1, stiffness(3), *(integral_weights(p, k) for k in (2, 1)), state)
        with pytest.raises(ParameterError):
            assemble_system(p, 1, 0.1, stiffness(4), integral_weights(p, 1), integral_weights(p, 0), state)

    @pytest.mark.parametrize("ab", [(0.7, 0.15), (0.35, 1.0), (0.5, 0.5)])
    def test_weak_form_residual(self, rng, ab):
        # recompute the semi-discrete equation with the generic operator G
        p = OperatorParams(*ab)
        N, n_steps = 8, 12
        config = SolverConfig(p, N, n_steps, T=0.9)
        state, basis = _state_after(config, rng.standard_normal(N + 1), n_steps)
        hist = state.history
        S = basis.matrix()
        tau = config.tau
        for n in range(1, n_steps + 1):
            SG = hist[: n + 1] @ S  # rows: S gamma_l
            g_op = np.array(
                [apply_G(p, SampleSeries(tau, SG[:, k])) for k in range(N + 1)]
            )
            res = (hist[n] - hist[n - 1]) / tau + p.alpha / p.beta * (n * tau) ** (p.alpha - 1) * g_op
            assert np.abs(res).max() <= 1e-10

    def test_single_step_dense(self, rng):
        p = OperatorParams(0.6, 0.4)
        N = 7
        g0 = rng.standard_normal(N + 1)
        config = SolverConfig(p, N, 1, T=0.3)
        rep = march(config, g0)
        # one step: (I + (alpha tau t^(alpha-1) + t^alpha) c_11 S) g1 = g0
        t = 0.3
        c11 = 1 / math.gamma(p.beta + 1)
        A = np.eye(N + 1) + (p.alpha * t * t ** (p.alpha - 1) + t**p.alpha) * c11 * stiffness(N).matrix()
        np.testing.assert_allclose(rep.final, np.linalg.solve(A, g0), atol=1e-13)


class TestMarch:
    def test_state_invariants(self, rng):
        config = SolverConfig(OperatorParams(0.5, 0.5), 6, 9)
        state, basis = _state_after(config, rng.standard_normal(7), 9)
        assert state.history.shape == (10, 7)
        for g, sg in zip(state.history, state.cached_products):
            np.testing.assert_allclose(sg, basis.matrix() @ g, atol=1e-14)
        with pytest.raises(ParameterError):
            step(state, config, basis)

    def test_parity(self):
        rep = run(SolverConfig(OperatorParams(1.0, 1.0), 12, 60), gauss, keep_history=True)
        assert np.abs(rep.history[:, 1::2]).max() <= 1e-13

    def test_stability_two_hundred_steps(self, rng):
        rep = march(SolverConfig(OperatorParams(0.7, 0.15), 16, 200), rng.standard_normal(17))
        assert rep.stability_ok
        assert rep.norms.size == 201
        assert np.all(rep.norms <= STABILITY_FACTOR * rep.norms[0] + 1e-12)

    def test_zero_data(self):
        rep = march(SolverConfig(OperatorParams(0.7, 0.15), 5, 20), np.zeros(6))
        assert not rep.final.any() and rep.max_ratio == 0.0

    def test_linearity(self, rng):
        config = SolverConfig(OperatorParams(0.45, 0.8), 10, 40)
        a, b = rng.standard_normal(11), rng.standard_normal(11)
        ra, rb, rab = (march(config, g).final for g in (a, b, a + b))
        np.testing.assert_allclose(rab, ra + rb, atol=1e-11)

    def test_run_projects(self):
        rep = run(SolverConfig(OperatorParams(0.5, 0.5), 6, 3), gauss)
        assert rep.norms[0] == pytest.approx(math.pi**0.25, rel=1e-14)
        assert {"march", "project"} <= set(rep.timings)

    def test_gamma0_size(self):
        with pytest.raises(ParameterError):
            march(SolverConfig(OperatorParams(0.5, 0.5), 6, 3), np.ones(5))

    @settings(max_examples=30, deadline=None)
    @given(
        st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.integers(1, 50),
        st.integers(0, 2**31 - 1),
    )
    def test_first_step_energy(self, a, b, n_steps, seed):
        g0 = np.random.default_rng(seed).standard_normal(9)
        rep = march(SolverConfig(OperatorParams(a, b), 8, n_steps), g0)
        assert rep.norms[1] <= rep.norms[0] * (1 + 1e-14)
        assert rep.stability_ok


def _beta1_orders(alpha, grid):
    spec = StudySpec(
        "solver-order", OperatorParams(alpha, 1.0), grid, "gauss", N=40, mode="exact"
    )
    return [row[2] for row in solver_convergence_study(spec)]


@pytest.mark.parametrize("alpha", [0.5, 0.65])
def test_temporal_order_beta1(alpha):
    # local order between 2048 and 4096 steps
    (p, _) = _beta1_orders(alpha, (2048, 4096))
    assert abs(p - alpha) <= 0.1


@pytest.mark.xfail(strict=True, reason="alpha=0.5 reaches its order slowly: 0.386 at 512 steps")
def test_temporal_order_beta1_at_512():
    (p, _) = _beta1_orders(0.5, (512, 1024))
    assert abs(p - 0.5) <= 0.1
