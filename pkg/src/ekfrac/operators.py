"""Discrete Erdelyi-Kober fractional integral and derivative operators.

With ``eta = alpha / beta`` the integral being discretised is

    I phi(t) = eta / Gamma(beta) * int_0^1 x^(eta-1) (1 - x^eta)^(beta-1) phi(x t) dx

and the derivative is ``D phi(t) = (beta + (beta/alpha) t d/dt) I phi(t)``.
Three discrete operators are provided on the uniform grid ``t_i = i tau``:

* :func:`apply_L`, the rectangle rule for ``I``;
* :func:`apply_G`, ``beta L + (beta/alpha) t_n`` times a backward difference of ``L``;
* :func:`apply_K`, which differentiates under the integral sign and needs the
  hypergeometric weights from :func:`derivative_weights`.

Power-law closed forms and an adaptive quadrature oracle are included for
testing convergence orders.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, ParameterError
from .specfun import DEFAULT_CONTROL, SeriesControl, gamma_real, hyp2f1

__all__ = [
    "OperatorParams",
    "WeightTable",
    "SampleSeries",
    "integral_weights",
    "weight_pair",
    "derivative_weights",
    "apply_L",
    "apply_G",
    "apply_K",
    "exact_integral_quadrature",
    "exact_derivative_quadrature",
    "exact_integral_powerlaw",
    "exact_derivative_powerlaw",
]


@dataclass(frozen=True)
class OperatorParams:
    """Exponents of the diffusion equation: ``0 < alpha < 2``, ``0 < beta <= 1``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha!r}")
        if not (0.0 < self.beta <= 1.0):
            raise ParameterError(f"beta must lie in (0, 1], got {self.beta!r}")

    @property
    def eta(self) -> float:
        return self.alpha / self.beta

    def require_subdiffusive(self):
        """Raise unless ``0 < alpha < 1`` and ``0 < beta < 1``, where the
        stability and convergence theory applies."""
        if not (self.alpha < 1.0 and self.beta < 1.0):
            raise ParameterError(
                f"this routine needs 0 < alpha, beta < 1, got ({self.alpha}, {self.beta})"
            )


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WeightTable:
    """Quadrature weights ``c[i-1] = c_{n,i}`` (and optionally ``d_{n,i}``)."""

    n: int
    c: np.ndarray
    d: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", _frozen(self.c))
        if self.d is not None:
            object.__setattr__(self, "d", _frozen(self.d))
        if self.c.shape != (self.n,) or (self.d is not None and self.d.shape != (self.n,)):
            raise ParameterError("weight arrays must have length n")


@dataclass(frozen=True)
class SampleSeries:
    """Samples ``values[i] = phi(i * tau)`` for ``i = 0..n``."""

    tau: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _frozen(self.values)
        if v.ndim != 1 or v.size < 1:
            raise ParameterError("values must be a non-empty 1-D array")
        if not np.all(np.isfinite(v)):
            raise ParameterError("sample values must be finite")
        if not self.tau > 0:
            raise ParameterError(f"tau must be positive, got {self.tau!r}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size - 1

    @property
    def t(self) -> float:
        return self.n * self.tau

    @classmethod
    def from_function(cls, phi: Callable, t: float, n: int) -> "SampleSeries":
        """Sample a vectorised ``phi`` on ``n`` uniform steps of ``[0, t]``."""
        grid = np.arange(n + 1) * (t / n)
        return cls(t / n, np.asarray(phi(grid), dtype=float))


def _log_ratio(i: np.ndarray, n: int) -> np.ndarray:
    # log(i/n); near i = n the rounded quotient would lose relative accuracy in log
    return np.where(2 * i < n, np.log(i / n), np.log1p(-(n - i) / n))


def integral_weights(params: OperatorParams, n: int) -> WeightTable:
    """Rectangle-rule weights for the integral operator at ``t_n``.

    ``c_{n,i} = [(1 - ((i-1)/n)^eta)^beta - (1 - (i/n)^eta)^beta] / Gamma(beta+1)``,
    evaluated without cancellation at either end of the interval.
    """
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n!r}")
    if n == 0:
        return WeightTable(0, np.empty(0))
    eta, beta = params.eta, params.beta
    i = np.arange(1, n + 1, dtype=float)
    with np.errstate(divide="ignore"):
        log_prev = _log_ratio(i - 1.0, n)
        log_cur = _log_ratio(i, n)
        one_minus_a = -np.expm1(eta * log_prev)  # 1 - x_{i-1}^eta
        one_minus_b = -np.expm1(eta * log_cur)  # 1 - x_i^eta
        b_minus_a = np.exp(eta * log_cur) * -np.expm1(eta * np.log1p(-1.0 / i))
        r = b_minus_a / one_minus_a
        # log of q = (1-b)/(1-a); log1p when q is near 1, direct logs when q is small
        log_q = np.where(
            r < 0.5,
            np.log1p(-np.minimum(r, 0.5)),
            np.log(one_minus_b) - np.log(one_minus_a),
        )
        c = np.exp(beta * np.log(one_minus_a)) * -np.expm1(beta * log_q)
    c /= gamma_real(beta + 1.0)
    return WeightTable(n, c)


def weight_pair(params: OperatorParams, n: int) -> tuple[WeightTable, WeightTable]:
    """Tables for ``n`` and ``n - 1``; the latter is empty when ``n == 1``."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n!r}")
    return integral_weights(params, n), integral_weights(params, n - 1)


def derivative_weights(
    params: OperatorParams, n: int, ctrl: SeriesControl = DEFAULT_CONTROL
) -> WeightTable:
    """Weights ``c_{n,i}`` together with ``d_{n,i}``.

    ``d_{n,i}`` is the integral of ``tau^eta (1 - tau^eta)^(beta-1)`` over
    ``[(i-1)/n, i/n]``, expressed through ``x^(eta+1) 2F1(1-beta, 1+beta/alpha;
    2+beta/alpha; x^eta)`` at the two end points.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n!r}")
    alpha, beta, eta = params.alpha, params.beta, params.eta
    x = np.arange(n + 1, dtype=float) / n
    z = x**eta
    a, b = 1.0 - beta, 1.0 + beta / alpha
    cumulative = x ** (eta + 1.0) * hyp2f1(a, b, b + 1.0, z, ctrl)
    d = beta / (alpha + beta) * np.diff(cumulative)
    return WeightTable(n, integral_weights(params, n).c, d)


def _check_table(table: WeightTable, series: SampleSeries, n: int):
    if table.n != n:
        raise ParameterError(f"weight table is for n={table.n}, series needs n={n}")


def apply_L(
    params: OperatorParams, series: SampleSeries, table: WeightTable | None = None
) -> float:
    """Rectangle rule ``sum_{i=1}^n c_{n,i} phi(t_i)``; exact for constants."""
    n = series.n
    if n < 1:
        raise ParameterError("apply_L needs at least one interior sample")
    if table is None:
        table = integral_weights(params, n)
    _check_table(table, series, n)
    return math.fsum(table.c * series.values[1:])


def apply_G(
    params: OperatorParams,
    series: SampleSeries,
    tables: tuple[WeightTable, WeightTable] | None = None,
) -> float:
    """Backward-difference discretisation of the derivative.

    ``G = beta L(t_n) + (beta/alpha) (t_n/tau) (L(t_n) - L(t_{n-1}))`` with the
    empty-sum convention ``L(t_0) = 0``.
    """
    n = series.n
    if n < 1:
        raise ParameterError("apply_G needs at least one interior sample")
    cur, prev = tables if tables is not None else weight_pair(params, n)
    _check_table(cur, series, n)
    _check_table(prev, series, n - 1)
    v = series.values
    l_n = math.fsum(cur.c * v[1:])
    # the increment is O(1/n) and gets multiplied by n: sum it directly, exactly rounded
    delta = np.empty(n)
    delta[:-1] = (cur.c[:-1] - prev.c) * v[1:n]
    delta[-1] = cur.c[-1] * v[n]
    return params.beta * l_n + params.beta / params.alpha * n * math.fsum(delta)


def apply_K(
    params: OperatorParams,
    series: SampleSeries,
    ctrl: SeriesControl = DEFAULT_CONTROL,
    table: WeightTable | None = None,
) -> float:
    """Discretisation differentiating under the integral sign.

    ``K = beta L(t_n) + (1/Gamma(beta)) sum_i d_{n,i} n (phi(t_i) - phi(t_{i-1}))``.
    """
    n = series.n
    if n < 1:
        raise ParameterError("apply_K needs phi(0) and at least one more sample")
    if table is None or table.d is None:
        table = derivative_weights(params, n, ctrl)
    _check_table(table, series, n)
    v = series.values
    l_n = math.fsum(table.c * v[1:])
    memory = n * math.fsum(table.d * np.diff(v))
    return params.beta * l_n + memory / gamma_real(params.beta)


def _quad(f, a, b, tol, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=500, **kw)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"adaptive quadrature failed: {exc}") from exc
    return val


def exact_integral_quadrature(
    params: OperatorParams, phi: Callable[[float], float], t: float, tol: float = 1e-12
) -> float:
    """Adaptive Gauss-Kronrod evaluation of the integral operator at ``t``.

    ``[0, 1]`` is split at ``x_s = 2^(-1/eta)``. On the left piece the factor
    ``x^(eta-1)`` and on the right piece (after ``u = x^eta``) the factor
    ``(1-u)^(beta-1)`` are handed to QUADPACK as algebraic end-point weights,
    so neither integrable singularity is sampled.
    """
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t!r}")
    eta, beta = params.eta, params.beta
    x_s = 0.5 ** (1.0 / eta)

    def left(x):
        return (1.0 - x**eta) ** (beta - 1.0) * phi(x * t)

    def right(u):
        return phi(u ** (1.0 / eta) * t)

    lo = eta * _quad(left, 0.0, x_s, tol / 2, weight="alg", wvar=(eta - 1.0, 0.0))
    hi = _quad(right, 0.5, 1.0, tol / 2, weight="alg", wvar=(0.0, beta - 1.0))
    return (lo + hi) / gamma_real(beta)


def exact_derivative_quadrature(
    params: OperatorParams,
    phi: Callable[[float], float],
    dphi: Callable[[float], float],
    t: float,
    tol: float = 1e-12,
) -> float:
    """Derivative operator via ``D phi = beta I[phi] + (beta/alpha) I[s phi'(s)]``.

    Uses ``t d/dt phi(x t) = (x t) phi'(x t)`` inside the integral.
    """
    i_phi = exact_integral_quadrature(params, phi, t, tol)
    i_sdphi = exact_integral_quadrature(params, lambda s: s * dphi(s), t, tol)
    return params.beta * i_phi + params.beta / params.alpha * i_sdphi


def exact_integral_powerlaw(params: OperatorParams, p: float, t: float) -> float:
    """``I t^p = t^p Gamma(1 + q) / Gamma(1 + beta + q)`` with ``q = p beta/alpha``."""
    q = p / params.eta
    return t**p * math.exp(math.lgamma(1.0 + q) - math.lgamma(1.0 + params.beta + q))


def exact_derivative_powerlaw(params: OperatorParams, p: float, t: float) -> float:
    """``D t^p = t^p Gamma(1 + q) / Gamma(beta + q)`` with ``q = p beta/alpha``."""
    if p < 0:
        raise ParameterError(f"p must be non-negative, got {p!r}")
    q = p / params.eta
    return t**p * math.exp(math.lgamma(1.0 + q) - math.lgamma(params.beta + q))
