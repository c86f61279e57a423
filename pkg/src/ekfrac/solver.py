"""Galerkin-Hermite time marching for the Erdelyi-Kober diffusion equation.

The semi-discrete scheme is

    (U^n - U^{n-1}) / tau = -(alpha/beta) t_n^(alpha-1) d/dx^2 [G U](t_n),

with the discrete derivative ``G`` of :mod:`ekfrac.operators` applied to the
time history of ``U``. Expanding ``U^n`` in Hermite functions and testing with
each basis function gives, at every step, the linear system

    (I + a_n S) gamma_n = gamma_{n-1}
                          - t_n^(alpha-1) sum_{l<n} w_{n,l} S gamma_l,

    a_n     = (alpha tau t_n^(alpha-1) + t_n^alpha) c_{n,n},
    w_{n,l} = alpha tau c_{n,l} + t_n (c_{n,l} - c_{n-1,l}),

where ``S`` is the Hermite stiffness matrix. ``S`` only couples indices of
equal parity, so each step reduces to two symmetric tridiagonal solves.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import solveh_banded

from .errors import ParameterError, SingularSystemError
from .hermite import HermiteBasis, QuadratureRule, gauss_hermite, project, stiffness
from .operators import OperatorParams, WeightTable, integral_weights

__all__ = [
    "SolverConfig",
    "SpectralState",
    "SolveReport",
    "STABILITY_FACTOR",
    "initial_state",
    "assemble_system",
    "solve_banded_spd",
    "step",
    "march",
    "run",
]

STABILITY_FACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class SolverConfig:
    """Problem and discretisation sizes.

    ``rule_size`` is the Gauss-Hermite rule used to project the initial data;
    ``None`` picks ``2N + 32`` nodes.
    """

    params: OperatorParams
    N: int
    n_steps: int
    T: float = 1.0
    rule_size: int | None = None

    def __post_init__(self):
        if self.N < 0:
            raise ParameterError(f"N must be non-negative, got {self.N!r}")
        if self.n_steps < 1:
            raise ParameterError(f"n_steps must be >= 1, got {self.n_steps!r}")
        if not self.T > 0:
            raise ParameterError(f"T must be positive, got {self.T!r}")

    @property
    def tau(self) -> float:
        return self.T / self.n_steps


@dataclass
class SpectralState:
    """Coefficient history of one run.

    Rows ``0..step`` of ``coeffs`` hold ``gamma_0 .. gamma_step``; the same
    rows of ``products`` hold ``S @ gamma_l``. ``weights`` is the table
    ``c_{step, .}`` needed by the next step.
    """

    step: int
    coeffs: np.ndarray
    products: np.ndarray
    weights: WeightTable

    @property
    def history(self) -> np.ndarray:
        return self.coeffs[: self.step + 1]

    @property
    def cached_products(self) -> np.ndarray:
        return self.products[: self.step + 1]

    @property
    def current(self) -> np.ndarray:
        return self.coeffs[self.step]

    def _reserve(self, rows: int):
        cap = self.coeffs.shape[0]
        if rows <= cap:
            return
        new = max(rows, 2 * cap)
        for name in ("coeffs", "products"):
            old = getattr(self, name)
            grown = np.zeros((new, old.shape[1]))
            grown[:cap] = old
            setattr(self, name, grown)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of :func:`march` / :func:`run`.

    ``norms[n]`` is ``||U^n||``; ``stability_ok`` records whether every norm
    stayed below ``sqrt(2) ||U^0|| + 1e-12``.
    """

    final: np.ndarray
    norms: np.ndarray
    stability_ok: bool
    timings: dict = field(default_factory=dict)
    history: np.ndarray | None = field(default=None, repr=False)

    @property
    def max_ratio(self) -> float:
        """``max_n ||U^n|| / ||U^0||`` (0 for zero data)."""
        if self.norms[0] == 0:
            return 0.0
        return float(self.norms.max() / self.norms[0])


def initial_state(gamma0, capacity: int = 1) -> SpectralState:
    """State at step 0 holding ``gamma0``."""
    g = np.asarray(gamma0, dtype=float)
    basis = stiffness(g.size - 1)
    coeffs = np.zeros((max(capacity, 1), g.size))
    products = np.zeros_like(coeffs)
    coeffs[0] = g
    products[0] = basis.matvec(g)
    return SpectralState(0, coeffs, products, WeightTable(0, np.empty(0)))


def _rhs_and_shift(params, n, tau, basis, weights_n, weights_nm1, state):
    if state.step != n - 1:
        raise ParameterError(f"state is at step {state.step}, cannot assemble step {n}")
    if weights_n.n != n or weights_nm1.n != n - 1:
        raise ParameterError("weight tables do not match the step index")
    if state.coeffs.shape[1] != basis.size:
        raise ParameterError("basis size does not match the coefficient vectors")
    alpha = params.alpha
    t_n = n * tau
    c_n = weights_n.c
    shift = (alpha * tau * t_n ** (alpha - 1.0) + t_n**alpha) * c_n[-1]
    b = state.coeffs[n - 1].copy()
    if n > 1:
        w = alpha * tau * c_n[:-1] + t_n * (c_n[:-1] - weights_nm1.c)
        b -= t_n ** (alpha - 1.0) * (w @ state.products[1:n])
    return shift, b


def assemble_system(
    params: OperatorParams,
    n: int,
    tau: float,
    basis: HermiteBasis,
    weights_n: WeightTable,
    weights_nm1: WeightTable,
    state: SpectralState,
) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``A = I + a_n S`` and right-hand side ``b`` for step ``n``."""
    shift, b = _rhs_and_shift(params, n, tau, basis, weights_n, weights_nm1, state)
    return np.eye(basis.size) + shift * basis.matrix(), b


def _solve_parity(diag, off2, b):
    """Solve the symmetric system with diagonal ``diag`` and ``+-2`` band ``off2``."""
    x = np.empty_like(b)
    for p in (0, 1):
        d = diag[p::2]
        if d.size == 0:
            continue
        if d.size == 1:
            if not d[0] > 0:
                raise SingularSystemError("system matrix is not positive definite")
            x[p] = b[p] / d[0]
            continue
        ab = np.zeros((2, d.size))
        ab[0, 1:] = off2[p::2][: d.size - 1]
        ab[1] = d
        try:
            x[p::2] = solveh_banded(ab, b[p::2], check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError("system matrix is not positive definite") from exc
    return x


def solve_banded_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` for symmetric ``A`` coupling only ``i`` and ``i +- 2``.

    The even and odd unknowns decouple into two tridiagonal SPD systems,
    each solved by a banded Cholesky factorisation.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m = b.size
    if A.shape != (m, m):
        raise ParameterError(f"A has shape {A.shape}, expected {(m, m)}")
    diag = np.diag(A).copy()
    off2 = np.diag(A, 2).copy() if m > 2 else np.empty(0)
    band = np.diag(diag)
    if m > 2:
        band += np.diag(off2, 2) + np.diag(np.diag(A, -2), -2)
    if not np.array_equal(A, band) or (m > 2 and not np.array_equal(off2, np.diag(A, -2))):
        raise ParameterError("A must be symmetric with nonzeros only on diagonals 0 and +-2")
    return _solve_parity(diag, off2, b)


def step(state: SpectralState, config: SolverConfig, basis: HermiteBasis) -> SpectralState:
    """Advance ``state`` by one time step in place and return it."""
    n = state.step + 1
    if n > config.n_steps:
        raise ParameterError(f"run already has {config.n_steps} steps")
    weights_n = integral_weights(config.params, n)
    shift, b = _rhs_and_shift(
        config.params, n, config.tau, basis, weights_n, state.weights, state
    )
    gamma = _solve_parity(1.0 + shift * basis.diag, shift * basis.off2, b)
    state._reserve(n + 1)
    state.coeffs[n] = gamma
    state.products[n] = basis.matvec(gamma)
    state.step = n
    state.weights = weights_n
    return state


def march(config: SolverConfig, gamma0, keep_history: bool = False) -> SolveReport:
    """Run ``config.n_steps`` steps from coefficient vector ``gamma0``."""
    gamma0 = np.asarray(gamma0, dtype=float)
    if gamma0.size != config.N + 1:
        raise ParameterError(f"gamma0 has {gamma0.size} entries, expected {config.N + 1}")
    basis = stiffness(config.N)
    t0 = time.perf_counter()
    state = initial_state(gamma0, capacity=config.n_steps + 1)
    for _ in range(config.n_steps):
        step(state, config, basis)
    elapsed = time.perf_counter() - t0
    norms = np.linalg.norm(state.history, axis=1)
    ok = bool(np.all(norms <= STABILITY_FACTOR * norms[0] + 1e-12))
    return SolveReport(
        final=state.current.copy(),
        norms=norms,
        stability_ok=ok,
        timings={"march": elapsed},
        history=state.history.copy() if keep_history else None,
    )


def run(
    config: SolverConfig,
    u0: Callable,
    rule: QuadratureRule | None = None,
    keep_history: bool = False,
) -> SolveReport:
    """Project ``u0`` onto the basis and march to ``t = T``."""
    t0 = time.perf_counter()
    if rule is None:
        rule = gauss_hermite(config.rule_size or 2 * config.N + 32)
    gamma0 = project(u0, config.N, rule, tail_tol=None)
    t_proj = time.perf_counter() - t0
    report = march(config, gamma0, keep_history=keep_history)
    report.timings["project"] = t_proj
    return report
