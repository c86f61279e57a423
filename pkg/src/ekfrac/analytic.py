"""Reference solutions of the Erdelyi-Kober diffusion equation.

The fundamental solution is self-similar,

    green(t, x) = 1/2 t^(-alpha/2) M_{beta/2}(|x| / t^(alpha/2)),

with ``M`` the Mainardi function. For ``beta = 1`` it is the Gaussian of
variance ``2 t^alpha`` and the equation reduces to ``u_t = alpha t^(alpha-1) u_xx``.
Convolving that kernel with ``u0(x) = exp(-x^2/2)`` gives a closed form used to
measure solver errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError, PrecisionLossError
from .operators import OperatorParams, _quad
from .specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    mainardi_m,
    mainardi_m_integral,
    mainardi_z_max,
)

__all__ = [
    "GreenEval",
    "green",
    "green_eval",
    "exact_gaussian_beta1",
    "convolve_oracle",
]

_INV_2SQRTPI = 0.5 / math.sqrt(math.pi)


@dataclass(frozen=True)
class GreenEval:
    """One evaluation of the fundamental solution."""

    t: float
    x: float
    value: float


def _mainardi(mu, z, ctrl, method):
    if method == "series":
        return mainardi_m(mu, z, ctrl)
    if method == "integral":
        return mainardi_m_integral(mu, z)
    if method == "auto":
        try:
            return mainardi_m(mu, z, ctrl)
        except PrecisionLossError:
            return mainardi_m_integral(mu, z)
    raise ParameterError(f"unknown method {method!r}")


def green(
    params: OperatorParams,
    t: float,
    x: float,
    ctrl: SeriesControl = DEFAULT_CONTROL,
    method: str = "series",
) -> float:
    """Fundamental solution at ``(t, x)``.

    ``beta = 1`` uses the Gaussian closed form. Otherwise the Mainardi function
    is summed by its Taylor series (``method="series"``), which raises
    :class:`~ekfrac.errors.PrecisionLossError` outside its reliable range.
    ``method="integral"`` uses the positive-integrand representation and
    ``"auto"`` falls back to it when the series loses precision.
    """
    t = float(t)
    x = float(x)
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t!r}")
    if params.beta == 1.0:
        s = t**params.alpha
        return _INV_2SQRTPI / math.sqrt(s) * math.exp(-x * x / (4.0 * s))
    scale = t ** (0.5 * params.alpha)
    return 0.5 / scale * _mainardi(0.5 * params.beta, abs(x) / scale, ctrl, method)


def green_eval(params: OperatorParams, t: float, x: float, **kw) -> GreenEval:
    """:func:`green` wrapped in a :class:`GreenEval` record."""
    return GreenEval(float(t), float(x), green(params, t, x, **kw))


def exact_gaussian_beta1(alpha: float, t: float, x):
    """Solution for ``beta = 1`` and ``u0(x) = exp(-x^2/2)``.

    ``u(t, x) = exp(-x^2 / (2 (1 + 2 t^alpha))) / sqrt(1 + 2 t^alpha)``.
    Works elementwise on arrays ``x``.
    """
    if t < 0:
        raise ParameterError(f"t must be non-negative, got {t!r}")
    s = 1.0 + 2.0 * t**alpha
    x = np.asarray(x, dtype=float)
    out = np.exp(-x * x / (2.0 * s)) / math.sqrt(s)
    return float(out) if out.ndim == 0 else out


def convolve_oracle(
    params: OperatorParams,
    u0: Callable[[float], float],
    t: float,
    x: float,
    tol: float = 1e-12,
    ctrl: SeriesControl = DEFAULT_CONTROL,
    method: str = "series",
    breakpoints=(0.0,),
) -> float:
    """``int green(t, x - y) u0(y) dy`` by adaptive quadrature.

    The integral is split at ``y = x`` where the kernel peaks (and, for
    ``beta < 1``, has a cusp), and at ``breakpoints`` where ``u0`` has
    features; the default suits data concentrated at the origin. For ``beta < 1`` the default series method
    confines the kernel to the Mainardi reliable range: the integration
    window is clipped there and the neglected tail is not estimated. Pass
    ``method="auto"`` to integrate over the whole line instead.
    """
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t!r}")
    x = float(x)

    def f(y):
        return green(params, t, x - y, ctrl, method) * u0(y)

    if params.beta == 1.0 or method != "series":
        lo, hi = -math.inf, math.inf
    else:
        half = mainardi_z_max(0.5 * params.beta) * t ** (0.5 * params.alpha)
        lo, hi = x - half, x + half
    cuts = sorted({x, *(float(b) for b in breakpoints if lo < b < hi)})
    edges = [lo, *cuts, hi]
    pieces = len(edges) - 1
    return math.fsum(_quad(f, a, b, tol / pieces) for a, b in zip(edges[:-1], edges[1:]))
