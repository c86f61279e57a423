"""Orthonormal Hermite functions on the real line.

``H_n(x) = pi^(-1/4) (2^n n!)^(-1/2) exp(-x^2/2) h_n(x)`` with ``h_n`` the
physicists' Hermite polynomial. Values come from the three-term recurrence of
the normalised functions, which stays finite for large ``n``.

Coefficient vectors are plain 1-D arrays ``gamma[0..N]`` representing
``sum_i gamma[i] H_i(x)``. Because the basis is orthonormal their Euclidean
norm is the L2 norm of the expansion.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, ParameterError

__all__ = [
    "HermiteBasis",
    "QuadratureRule",
    "ProjectionTailWarning",
    "hermite_functions",
    "hermite_fn",
    "stiffness",
    "gauss_hermite",
    "project",
    "eval_expansion",
    "l2_norm",
    "l2_error",
]

_PI_M14 = math.pi**-0.25


class ProjectionTailWarning(UserWarning):
    """The highest retained coefficients are not small: truncation is coarse."""


def _as_array(x):
    return np.asarray(x, dtype=float)


def _call(f, x):
    try:
        y = np.asarray(f(x), dtype=float)
    except TypeError:  # scalar-only callable
        return np.vectorize(f, otypes=[float])(x)
    if y.shape != x.shape:
        y = np.vectorize(f, otypes=[float])(x)
    return y


def hermite_functions(N: int, x) -> np.ndarray:
    """Values of ``H_0 .. H_N`` at ``x``; result has shape ``(N + 1,) + x.shape``."""
    if N < 0:
        raise ParameterError(f"N must be non-negative, got {N!r}")
    x = _as_array(x)
    out = np.empty((N + 1,) + x.shape)
    # recur on exp(x^2/2) H_n with a per-point log scale so that neither the
    # Gaussian factor underflows nor the polynomial part overflows for |x| >~ 38
    log_scale = -0.5 * x * x
    h_prev = np.zeros_like(x)
    h = np.full_like(x, _PI_M14)
    out[0] = h * np.exp(log_scale)
    for n in range(N):
        h_prev, h = h, x * math.sqrt(2.0 / (n + 1)) * h - math.sqrt(n / (n + 1)) * h_prev
        big = np.abs(h) > 1e150
        if big.any():
            h = np.where(big, h * 1e-150, h)
            h_prev = np.where(big, h_prev * 1e-150, h_prev)
            log_scale = np.where(big, log_scale + 150.0 * math.log(10.0), log_scale)
        with np.errstate(under="ignore", over="ignore"):
            out[n + 1] = h * np.exp(log_scale)
    return out


def hermite_fn(n: int, x):
    """Single Hermite function ``H_n(x)``."""
    v = hermite_functions(n, x)[n]
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class HermiteBasis:
    """Truncated basis ``H_0 .. H_N`` and its banded stiffness matrix.

    ``S[n, n] = n + 1/2`` and ``S[n, n+2] = S[n+2, n] = -sqrt((n+1)(n+2))/2``
    are the inner products of derivatives; everything else vanishes.
    """

    N: int
    diag: np.ndarray
    off2: np.ndarray

    @property
    def size(self) -> int:
        return self.N + 1

    def matrix(self) -> np.ndarray:
        S = np.diag(self.diag)
        if self.N >= 2:
            S += np.diag(self.off2, 2) + np.diag(self.off2, -2)
        return S

    def matvec(self, g: np.ndarray) -> np.ndarray:
        """``S @ g`` along the last axis without forming ``S``."""
        g = np.asarray(g, dtype=float)
        out = self.diag * g
        if self.N >= 2:
            out[..., :-2] += self.off2 * g[..., 2:]
            out[..., 2:] += self.off2 * g[..., :-2]
        return out


def stiffness(N: int) -> HermiteBasis:
    """Stiffness data for the basis truncated at index ``N``."""
    if N < 0:
        raise ParameterError(f"N must be non-negative, got {N!r}")
    n = np.arange(N + 1, dtype=float)
    diag = n + 0.5
    m = np.arange(max(N - 1, 0), dtype=float)
    off2 = -0.5 * np.sqrt((m + 1.0) * (m + 2.0))
    for a in (diag, off2):
        a.flags.writeable = False
    return HermiteBasis(N, diag, off2)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for ``int f(x) exp(-x^2) dx``.

    ``scaled_weights = weights * exp(nodes^2)`` is stored separately: it is
    what integrals over the whole line use, and for large rules it stays
    representable where ``exp(nodes^2)`` alone overflows.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        """``int_R f(x) dx`` for ``f`` decaying roughly like a Gaussian."""
        return float(np.dot(self.scaled_weights, _call(f, self.nodes)))


def gauss_hermite(m: int, newton_steps: int = 2) -> QuadratureRule:
    """``m``-point Gauss-Hermite rule via Golub-Welsch plus Newton polishing.

    Nodes are eigenvalues of the Jacobi matrix with off-diagonal
    ``sqrt(k/2)``. Scaled weights use ``1 / (m H_{m-1}(x_j)^2)``, which
    needs no factorials and no ``exp(x^2)``.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m!r}")
    if m == 1:
        x = np.zeros(1)
    else:
        off = np.sqrt(np.arange(1, m) / 2.0)
        try:
            x = eigh_tridiagonal(np.zeros(m), off, eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"Jacobi eigenproblem failed for m={m}") from exc
        for _ in range(newton_steps):
            h = hermite_functions(m, x)
            x = x - h[m] / (math.sqrt(2.0 * m) * h[m - 1])
        x = 0.5 * (x - x[::-1])
    h_prev = hermite_functions(m - 1, x)[m - 1]
    scaled = 1.0 / (m * h_prev**2)
    with np.errstate(under="ignore"):
        weights = scaled * np.exp(-x * x)
    for a in (x, weights, scaled):
        a.flags.writeable = False
    return QuadratureRule(x, weights, scaled)


def project(u0, N: int, rule: QuadratureRule | None = None, tail_tol: float | None = 1e-4):
    """Coefficients ``gamma_i = int u0(x) H_i(x) dx`` for ``i = 0..N``.

    The default rule has ``2N + 32`` nodes. Slowly decaying data such as
    ``1/(1+x^2)`` needs a much larger rule (several hundred nodes). A
    :class:`ProjectionTailWarning` is issued when the last two coefficients
    exceed ``tail_tol`` relative to the coefficient norm.
    """
    if rule is None:
        rule = gauss_hermite(2 * N + 32)
    x = rule.nodes
    vals = rule.scaled_weights * _call(u0, x)
    gamma = hermite_functions(N, x) @ vals
    if tail_tol is not None:
        norm = np.linalg.norm(gamma)
        tail = np.abs(gamma[-2:]).max()
        if norm > 0 and tail > tail_tol * norm:
            warnings.warn(
                f"projection tail |gamma_N| ~ {tail:.2e} vs norm {norm:.2e}; "
                "consider a larger N",
                ProjectionTailWarning,
                stacklevel=2,
            )
    return gamma


def eval_expansion(gamma, x):
    """``sum_i gamma[i] H_i(x)`` in one pass of the recurrence."""
    gamma = np.asarray(gamma, dtype=float)
    x = _as_array(x)
    log_scale = -0.5 * x * x
    h_prev = np.zeros_like(x)
    h = np.full_like(x, _PI_M14)
    total = gamma[0] * h
    for n in range(gamma.size - 1):
        h_prev, h = h, x * math.sqrt(2.0 / (n + 1)) * h - math.sqrt(n / (n + 1)) * h_prev
        big = np.abs(h) > 1e150
        if big.any():
            h, h_prev, total = (np.where(big, a * 1e-150, a) for a in (h, h_prev, total))
            log_scale = np.where(big, log_scale + 150.0 * math.log(10.0), log_scale)
        total = total + gamma[n + 1] * h
    with np.errstate(under="ignore", over="ignore"):
        total = total * np.exp(log_scale)
    return float(total) if total.ndim == 0 else total


def l2_norm(gamma) -> float:
    """L2 norm of an expansion (Parseval)."""
    return float(np.linalg.norm(gamma))


def l2_error(gamma, f, rule: QuadratureRule | None = None) -> float:
    """``|| sum_i gamma_i H_i - f ||_{L2(R)}`` by Gauss-Hermite quadrature.

    Defaults to a 200-node rule, enough for Gaussians of moderate width.
    """
    if rule is None:
        rule = gauss_hermite(200)
    x = rule.nodes
    diff = eval_expansion(gamma, x) - _call(f, x)
    return math.sqrt(max(float(np.dot(rule.scaled_weights, diff * diff)), 0.0))
