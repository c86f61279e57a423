"""Convergence studies, stability sweeps and CSV output.

Each study takes a :class:`StudySpec` and returns a list of row tuples. The
row layouts match the CSV headers in :data:`HEADERS`; :func:`write_csv`
serialises them deterministically.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import exact_gaussian_beta1
from .errors import ParameterError
from .hermite import QuadratureRule, gauss_hermite, l2_error, project
from .operators import (
    OperatorParams,
    SampleSeries,
    apply_G,
    apply_K,
    apply_L,
    derivative_weights,
    exact_derivative_powerlaw,
    exact_derivative_quadrature,
    exact_integral_powerlaw,
    exact_integral_quadrature,
    integral_weights,
)
from .solver import STABILITY_FACTOR, SolverConfig, march, run

__all__ = [
    "KINDS",
    "HEADERS",
    "TestFunction",
    "TEST_FUNCTIONS",
    "StudySpec",
    "aitken_order",
    "loglog_slope",
    "operator_convergence_study",
    "solver_convergence_study",
    "spectral_convergence_study",
    "stability_sweep",
    "solve_trace",
    "weights_table",
    "format_csv",
    "write_csv",
]

KINDS = ("operator-order", "solver-order", "spectral-order", "stability-sweep")

HEADERS = {
    "operator-order": ("n", "err_L", "err_K", "err_G", "p_L", "p_K", "p_G"),
    "solver-order": ("steps", "err", "p"),
    "spectral-order": ("N", "err"),
    "stability-sweep": ("alpha", "beta", "ratio", "pass"),
    "solve": ("step", "t", "norm", "stable"),
}

# Gauss-Hermite rule used for slowly decaying initial data
_LORENTZ_RULE = 400


@dataclass(frozen=True)
class TestFunction:
    """Named function with its derivative.

    ``power`` is set for monomials ``t^p``, whose operator images have closed
    forms; ``rule_size`` is the projection rule the solver needs for it.
    """

    __test__ = False  # not a pytest class

    name: str
    f: Callable
    df: Callable
    power: float | None = None
    rule_size: int | None = None


TEST_FUNCTIONS = {
    "exp": TestFunction("exp", np.exp, np.exp),
    "pow32": TestFunction("pow32", lambda t: np.power(t, 1.5), lambda t: 1.5 * np.sqrt(t), 1.5),
    "pow2": TestFunction("pow2", lambda t: np.power(t, 2.0), lambda t: 2.0 * t, 2.0),
    "one": TestFunction("one", np.ones_like, np.zeros_like, 0.0),
    "gauss": TestFunction(
        "gauss", lambda x: np.exp(-0.5 * x * x), lambda x: -x * np.exp(-0.5 * x * x)
    ),
    "lorentz": TestFunction(
        "lorentz",
        lambda x: 1.0 / (1.0 + x * x),
        lambda x: -2.0 * x / (1.0 + x * x) ** 2,
        rule_size=_LORENTZ_RULE,
    ),
}

OPERATOR_FUNCTIONS = ("exp", "pow32", "pow2", "one")
INITIAL_CONDITIONS = ("gauss", "lorentz")


@dataclass(frozen=True)
class StudySpec:
    """Description of one study.

    ``grid`` holds step counts ``n`` for operator and solver studies and
    truncation indices ``N`` for spectral studies. Fields that a kind does not
    use are ignored.
    """

    kind: str
    params: OperatorParams | None = None
    grid: tuple = ()
    test_function: str = "exp"
    t_eval: float = 1.0
    output: str | None = None
    N: int = 16
    n_steps: int = 200
    reference_N: int | None = 60
    mode: str = "auto"
    seed: int = 0
    init: str = "random"
    alphas: tuple = ()
    betas: tuple = ()
    tol: float = 1e-12

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if self.kind == "stability-sweep":
            if not self.alphas or not self.betas:
                raise ParameterError("stability-sweep needs alpha and beta grids")
            if self.n_steps < 1 or self.N < 0:
                raise ParameterError("stability-sweep needs n_steps >= 1 and N >= 0")
            if self.init not in ("random", "unit", "zero"):
                raise ParameterError(f"unknown init {self.init!r}")
            return
        if self.params is None:
            raise ParameterError(f"{self.kind} needs params")
        if not self.grid:
            raise ParameterError("grid must not be empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ParameterError("grid must be strictly increasing")
        if self.kind == "spectral-order":
            if self.grid[0] < 0:
                raise ParameterError("truncation indices must be non-negative")
        elif self.grid[0] < 1:
            raise ParameterError("step counts must be >= 1")
        allowed = OPERATOR_FUNCTIONS if self.kind == "operator-order" else INITIAL_CONDITIONS
        if self.test_function not in allowed:
            raise ParameterError(
                f"{self.kind} test_function must be one of {allowed}, got {self.test_function!r}"
            )
        if not self.t_eval > 0:
            raise ParameterError(f"t_eval must be positive, got {self.t_eval!r}")
        if self.kind == "solver-order" and self.mode not in ("auto", "aitken", "exact"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.kind == "spectral-order" and self.mode not in ("auto", "reference", "exact"):
            raise ParameterError(f"unknown mode {self.mode!r}")


def aitken_order(A_n: float, A_2n: float, A_4n: float) -> float:
    """Order estimate ``log2((A_2n - A_n) / (A_4n - A_2n))``.

    Raises :class:`ParameterError` when ``A_4n == A_2n``; returns NaN when the
    ratio is not positive (the sequence is not monotone).
    """
    den = A_4n - A_2n
    if den == 0:
        raise ParameterError("degenerate Aitken denominator: A_4n == A_2n")
    ratio = (A_2n - A_n) / den
    if not ratio > 0:
        return math.nan
    return math.log2(ratio)


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log|y|`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.size < 2 or np.any(y == 0):
        raise ParameterError("need at least two points with non-zero errors")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _aitken_or_nan(a, b, c):
    try:
        return aitken_order(a, b, c)
    except ParameterError:
        return math.nan


def _operator_exact(params, fn: TestFunction, t, tol):
    if fn.power is not None:
        return (
            exact_integral_powerlaw(params, fn.power, t),
            exact_derivative_powerlaw(params, fn.power, t),
        )
    f = lambda s: float(fn.f(s))  # noqa: E731
    df = lambda s: float(fn.df(s))  # noqa: E731
    return (
        exact_integral_quadrature(params, f, t, tol),
        exact_derivative_quadrature(params, f, df, t, tol),
    )


def operator_convergence_study(spec: StudySpec) -> list[tuple]:
    """Rows ``(n, err_L, err_K, err_G, p_L, p_K, p_G)``.

    Errors are signed (approximation minus exact value) so that the Aitken
    estimate on rows ``n, 2n, 4n`` equals the estimate on the raw
    approximations. ``p`` is NaN where the next two grid entries are not
    ``2n`` and ``4n``.
    """
    if spec.kind != "operator-order":
        raise ParameterError("operator_convergence_study needs kind='operator-order'")
    params, t = spec.params, spec.t_eval
    fn = TEST_FUNCTIONS[spec.test_function]
    exact_i, exact_d = _operator_exact(params, fn, t, spec.tol)
    errs = []
    for n in spec.grid:
        series = SampleSeries.from_function(fn.f, t, n)
        table = derivative_weights(params, n)
        prev = integral_weights(params, n - 1)
        errs.append(
            (
                apply_L(params, series, table) - exact_i,
                apply_K(params, series, table=table) - exact_d,
                apply_G(params, series, (table, prev)) - exact_d,
            )
        )
    return _attach_aitken(spec.grid, errs)


def _attach_aitken(grid, errs):
    rows = []
    for j, n in enumerate(grid):
        ps = [math.nan] * len(errs[j])
        if j + 2 < len(grid) and grid[j + 1] == 2 * n and grid[j + 2] == 4 * n:
            ps = [_aitken_or_nan(errs[j][k], errs[j + 1][k], errs[j + 2][k]) for k in range(len(ps))]
        rows.append((n, *errs[j], *ps))
    return rows


def _consecutive_orders(grid, errs):
    ps = []
    for j in range(len(grid)):
        if j + 1 < len(grid) and errs[j] > 0 and errs[j + 1] > 0:
            ps.append(math.log(errs[j] / errs[j + 1]) / math.log(grid[j + 1] / grid[j]))
        else:
            ps.append(math.nan)
    return ps


def _rule_for(fn: TestFunction, N: int) -> QuadratureRule:
    return gauss_hermite(fn.rule_size or 2 * N + 32)


def solver_convergence_study(spec: StudySpec) -> list[tuple]:
    """Rows ``(steps, err, p)`` for the time-marching scheme.

    Modes:

    * ``"exact"``: ``err`` is the L2 distance to the closed-form solution
      (``beta = 1`` and Gaussian data only);
    * ``"aitken"``: ``err = ||U^m - U^{2m}||`` between runs with ``m`` and
      ``2m`` steps, which for a doubling grid is the Aitken difference;
    * ``"auto"``: ``"exact"`` when it applies, otherwise ``"aitken"``.

    ``p = log(err_j / err_{j+1}) / log(m_{j+1} / m_j)`` from consecutive rows;
    the last row has NaN.
    """
    if spec.kind != "solver-order":
        raise ParameterError("solver_convergence_study needs kind='solver-order'")
    params = spec.params
    fn = TEST_FUNCTIONS[spec.test_function]
    exact_ok = params.beta == 1.0 and fn.name == "gauss"
    mode = spec.mode
    if mode == "auto":
        mode = "exact" if exact_ok else "aitken"
    if mode == "exact" and not exact_ok:
        raise ParameterError("exact mode needs beta = 1 and Gaussian initial data")
    rule = _rule_for(fn, spec.N)
    gamma0 = project(fn.f, spec.N, rule, tail_tol=None)
    T = spec.t_eval

    finals: dict[int, np.ndarray] = {}

    def final(m):
        if m not in finals:
            finals[m] = march(SolverConfig(params, spec.N, m, T), gamma0).final
        return finals[m]

    errs = []
    if mode == "exact":
        big = gauss_hermite(200)
        for m in spec.grid:
            errs.append(l2_error(final(m), lambda x: exact_gaussian_beta1(params.alpha, T, x), big))
    else:
        for m in spec.grid:
            errs.append(float(np.linalg.norm(final(m) - final(2 * m))))
    ps = _consecutive_orders(spec.grid, errs)
    return [(m, e, p) for m, e, p in zip(spec.grid, errs, ps)]


def spectral_convergence_study(spec: StudySpec) -> list[tuple]:
    """Rows ``(N, err)`` at fixed ``n_steps``.

    ``mode="reference"`` (or ``"auto"``) measures the coefficient distance to
    a run with ``reference_N``; ``mode="exact"`` the L2 distance to the
    closed-form solution.
    """
    if spec.kind != "spectral-order":
        raise ParameterError("spectral_convergence_study needs kind='spectral-order'")
    params = spec.params
    fn = TEST_FUNCTIONS[spec.test_function]
    T = spec.t_eval
    mode = "reference" if spec.mode == "auto" else spec.mode
    rows = []
    if mode == "exact":
        if not (params.beta == 1.0 and fn.name == "gauss"):
            raise ParameterError("exact mode needs beta = 1 and Gaussian initial data")
        big = gauss_hermite(200)
        for N in spec.grid:
            f = run(SolverConfig(params, N, spec.n_steps, T), fn.f, rule=_rule_for(fn, N)).final
            rows.append((N, l2_error(f, lambda x: exact_gaussian_beta1(params.alpha, T, x), big)))
        return rows
    ref_N = spec.reference_N
    if ref_N is None or ref_N < spec.grid[-1]:
        raise ParameterError("reference_N must be at least the largest grid value")
    ref = run(SolverConfig(params, ref_N, spec.n_steps, T), fn.f, rule=_rule_for(fn, ref_N)).final
    for N in spec.grid:
        if N == ref_N:
            rows.append((N, 0.0))
            continue
        f = run(SolverConfig(params, N, spec.n_steps, T), fn.f, rule=_rule_for(fn, N)).final
        diff = ref.copy()
        diff[: N + 1] -= f
        rows.append((N, float(np.linalg.norm(diff))))
    return rows


def _initial_coeffs(spec: StudySpec, rng: np.random.Generator) -> np.ndarray:
    if spec.init == "random":
        return rng.standard_normal(spec.N + 1)
    g = np.zeros(spec.N + 1)
    if spec.init == "unit":
        g[0] = 1.0
    return g


def stability_sweep(spec: StudySpec) -> list[tuple]:
    """Rows ``(alpha, beta, max_n ||U^n|| / ||U^0||, pass)`` over the grid.

    One random coefficient vector is drawn per grid point from a generator
    seeded with ``spec.seed``, in row-major order over ``(alpha, beta)``.
    """
    if spec.kind != "stability-sweep":
        raise ParameterError("stability_sweep needs kind='stability-sweep'")
    rng = np.random.default_rng(spec.seed)
    rows = []
    for a in spec.alphas:
        for b in spec.betas:
            params = OperatorParams(a, b)
            gamma0 = _initial_coeffs(spec, rng)
            report = march(SolverConfig(params, spec.N, spec.n_steps, spec.t_eval), gamma0)
            ratio = report.max_ratio
            rows.append((a, b, ratio, bool(ratio <= STABILITY_FACTOR + 1e-12)))
    return rows


def solve_trace(config: SolverConfig, ic: str) -> list[tuple]:
    """Rows ``(step, t, norm, stable)`` of a single run."""
    if ic not in INITIAL_CONDITIONS:
        raise ParameterError(f"ic must be one of {INITIAL_CONDITIONS}, got {ic!r}")
    fn = TEST_FUNCTIONS[ic]
    report = run(config, fn.f, rule=_rule_for(fn, config.N))
    bound = STABILITY_FACTOR * report.norms[0] + 1e-12
    return [
        (k, k * config.tau, float(v), bool(v <= bound)) for k, v in enumerate(report.norms)
    ]


def weights_table(params: OperatorParams, n: int, with_d: bool = False) -> list[tuple]:
    """Rows ``(i, c_{n,i}[, d_{n,i}])`` for ``i = 1..n``."""
    if with_d:
        table = derivative_weights(params, n)
        return [(i + 1, float(c), float(d)) for i, (c, d) in enumerate(zip(table.c, table.d))]
    table = integral_weights(params, n)
    return [(i + 1, float(c)) for i, c in enumerate(table.c)]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def format_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """CSV text with a header, 17 significant digits and LF line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Write :func:`format_csv` output to ``path`` (bytes, so no newline translation)."""
    text = format_csv(header, rows)
    with open(path, "wb") as fh:
        fh.write(text.encode("ascii"))
    return text
