"""Real special functions: gamma, Pochhammer, Gauss 2F1 and the Mainardi function.

Everything here works on real arguments only. The hypergeometric function is
restricted to ``z`` in ``[0, 1]``, which is all the operator weights need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError, PoleError, PrecisionLossError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "gamma_real",
    "rgamma",
    "pochhammer",
    "hyp2f1",
    "mainardi_m",
    "mainardi_m_sine_series",
    "mainardi_m_integral",
    "mainardi_half",
    "mainardi_condition",
    "mainardi_z_max",
]

_EPS = float(np.finfo(float).eps)
_GAMMA_OVERFLOW = 171.62


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule shared by the power series in this module.

    Attributes:
        tol: Relative size of the last retained term w.r.t. the partial sum.
        max_terms: Hard cap on the number of terms.
    """

    tol: float = 1e-14
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (self.tol > 0 and self.tol >= _EPS):
            raise ParameterError(f"tol must be >= machine epsilon, got {self.tol!r}")
        if self.max_terms < 1:
            raise ParameterError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma_real(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`PoleError` at ``0, -1, -2, ...`` and :class:`OverflowError`
    beyond ``x ~ 171.6``.
    """
    x = float(x)
    if _is_nonpositive_int(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x > _GAMMA_OVERFLOW:
        raise OverflowError(f"gamma({x!r}) overflows double precision")
    return math.gamma(x)


def _log_abs_rgamma(y: float) -> tuple[float, float]:
    """Return ``(log|1/Gamma(y)|, sign(1/Gamma(y)))``; sign is 0 at poles."""
    if _is_nonpositive_int(y):
        return -math.inf, 0.0
    if y > 0:
        return -math.lgamma(y), 1.0
    # reflection: 1/Gamma(y) = Gamma(1-y) sin(pi y) / pi
    s = math.sin(math.pi * y)
    return math.lgamma(1.0 - y) + math.log(abs(s)) - math.log(math.pi), math.copysign(1.0, s)


def rgamma(y: float) -> float:
    """Reciprocal gamma ``1/Gamma(y)``, entire; zero at the poles of gamma."""
    logv, sign = _log_abs_rgamma(float(y))
    if sign == 0.0:
        return 0.0
    return sign * math.exp(logv)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    if k < 0:
        raise ParameterError(f"k must be non-negative, got {k!r}")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def _hyp2f1_series(a, b, c, z, ctrl):
    """Vectorised partial sums of the defining series; ``z`` is an array."""
    total = np.ones_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(ctrl.max_terms):
        if not active.any():
            return total
        term = np.where(active, term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z, 0.0)
        total = total + term
        active &= np.abs(term) > ctrl.tol * np.abs(total)
    if active.any():
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}; z) did not converge in {ctrl.max_terms} terms "
            f"(worst z = {float(np.max(z[active])):.17g})"
        )
    return total


def hyp2f1(a: float, b: float, c: float, z, ctrl: SeriesControl = DEFAULT_CONTROL):
    """Gauss hypergeometric function ``2F1(a, b; c; z)`` for ``0 <= z <= 1``.

    ``z`` may be a scalar or an array. Points with ``z <= 1/2`` use the power
    series directly. Above that, the linear transformation ``z -> 1 - z`` is
    applied so that both series run at argument ``<= 1/2``; this requires
    ``c - a - b`` to be non-integer, otherwise the raw series is summed.
    ``z == 1`` uses Gauss's summation theorem and needs ``c - a - b > 0``.
    """
    if _is_nonpositive_int(c):
        raise ParameterError(f"c must not be a non-positive integer, got {c!r}")
    zz = np.asarray(z, dtype=float)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    if np.any(~np.isfinite(zz)) or np.any((zz < 0) | (zz > 1)):
        raise ParameterError("2F1 is only evaluated for z in [0, 1]")
    s = c - a - b
    at_one = zz == 1.0
    if at_one.any() and s <= 0:
        raise ParameterError(f"2F1 at z=1 diverges unless c-a-b > 0 (got {s})")

    out = np.empty_like(zz)
    gauss_sum = None
    if at_one.any():
        gauss_sum = gamma_real(c) * gamma_real(s) * rgamma(c - a) * rgamma(c - b)
        out[at_one] = gauss_sum

    s_is_int = float(s).is_integer()
    near = (zz > 0.5) & ~at_one
    if s_is_int:
        near[:] = False
    low = ~near & ~at_one
    if low.any():
        out[low] = _hyp2f1_series(a, b, c, zz[low], ctrl)
    if near.any():
        w = 1.0 - zz[near]
        c1 = gamma_real(c) * gamma_real(s) * rgamma(c - a) * rgamma(c - b)
        c2 = gamma_real(c) * gamma_real(-s) * rgamma(a) * rgamma(b)
        part1 = c1 * _hyp2f1_series(a, b, 1.0 - s, w, ctrl) if c1 != 0.0 else 0.0
        part2 = (
            c2 * w**s * _hyp2f1_series(c - a, c - b, 1.0 + s, w, ctrl) if c2 != 0.0 else 0.0
        )
        out[near] = part1 + part2
    return float(out[0]) if scalar else out


def _mainardi_log_terms(mu: float, z: float):
    """Yield ``(n, log|term|, sign, size)`` of the first Mainardi series.

    ``size`` is the sum of the magnitudes of the pieces of ``log|term|``; the
    relative rounding error of the term is about ``eps * size``.
    """
    logz = math.log(z)
    n = 0
    while True:
        logr, sign = _log_abs_rgamma(1.0 - mu - mu * n)
        lf = math.lgamma(n + 1.0)
        size = 1.0 + abs(n * logz) + lf + (abs(logr) if sign else 0.0)
        yield n, n * logz - lf + logr, sign, size
        n += 1


def _mainardi_envelope(mu: float, z: float, n: int) -> float:
    # |1/Gamma(y)| <= Gamma(1-y)/pi for y < 0; used as a stopping bound across exact zeros
    y = 1.0 - mu - mu * n
    logz = math.log(z)
    if y > 0:
        return n * logz - math.lgamma(n + 1.0) - math.lgamma(y)
    return n * logz - math.lgamma(n + 1.0) + math.lgamma(1.0 - y) - math.log(math.pi)


def _check_mu(mu: float):
    if not (0.0 < mu < 1.0):
        raise ParameterError(f"mu must lie in (0, 1), got {mu!r}")


def _mainardi_sum(mu, z, ctrl):
    """Return ``(sum, max|term|, rounding error bound)``."""
    total = 0.0
    comp = 0.0
    max_term = 0.0
    err = 0.0
    prev_env = math.inf  # log of the term envelope
    for n, logt, sign, size in _mainardi_log_terms(mu, z):
        if n >= ctrl.max_terms:
            raise ConvergenceError(f"M_{mu}({z}) did not converge in {ctrl.max_terms} terms")
        if logt > 700.0:
            raise PrecisionLossError(f"M_{mu}({z}): series terms overflow double precision")
        if sign != 0.0:
            t = sign * math.exp(logt)
            if n % 2:
                t = -t
            # Kahan summation keeps the summation error near one ulp of max_term
            yv = t - comp
            tv = total + yv
            comp = (tv - total) - yv
            total = tv
            max_term = max(max_term, abs(t))
            err += abs(t) * size
        env = _mainardi_envelope(mu, z, n)
        if n > 1 and env < prev_env and total != 0 and env <= math.log(ctrl.tol * abs(total)):
            return total, max_term, _EPS * (err + 2.0 * max_term)
        prev_env = env


def mainardi_condition(mu: float, z: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Estimated relative rounding error of :func:`mainardi_m` at ``z``.

    The bound adds the summation error (a few ulps of the largest term) to
    the error of forming each term from logarithms, and divides by ``|M|``.
    """
    _check_mu(mu)
    if z == 0:
        return _EPS
    total, _, err = _mainardi_sum(mu, float(z), ctrl)
    return err / abs(total) if total != 0 else math.inf


def mainardi_m(
    mu: float,
    z: float,
    ctrl: SeriesControl = DEFAULT_CONTROL,
    max_rel_error: float = 1e-8,
) -> float:
    """Mainardi (M-Wright) function by its Taylor series.

    ``M_mu(z) = sum_n (-z)^n / (n! Gamma(1 - mu - mu n))`` for ``0 < mu < 1``,
    ``z >= 0``. The series is entire but alternating; its largest term grows
    quickly with ``z``. If the estimated relative rounding error (see
    :func:`mainardi_condition`) exceeds ``max_rel_error``, or the largest term
    exceeds ``|M| / ctrl.tol``, :class:`PrecisionLossError` is raised.
    See :func:`mainardi_z_max` for the usable range.
    """
    _check_mu(mu)
    z = float(z)
    if z < 0 or not math.isfinite(z):
        raise ParameterError(f"z must be finite and non-negative, got {z!r}")
    if z == 0.0:
        return rgamma(1.0 - mu)
    total, max_term, err = _mainardi_sum(mu, z, ctrl)
    if err > max_rel_error * abs(total) or max_term * ctrl.tol > abs(total):
        raise PrecisionLossError(
            f"M_{mu}({z}): largest term {max_term:.3e} vs value {total:.3e}; "
            "cancellation exceeds the allowed precision loss"
        )
    return total


def mainardi_m_sine_series(mu: float, z: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Second series form, ``(1/pi) sum_{n>=1} (-z)^(n-1)/(n-1)! Gamma(mu n) sin(pi mu n)``.

    Kept as an independent cross-check of :func:`mainardi_m`; no
    precision-loss guard.
    """
    _check_mu(mu)
    z = float(z)
    if z == 0.0:
        return math.gamma(mu) * math.sin(math.pi * mu) / math.pi
    logz = math.log(z)
    total = 0.0
    prev = math.inf
    for n in range(1, ctrl.max_terms + 1):
        loga = (n - 1) * logz - math.lgamma(n) + math.lgamma(mu * n)
        a = math.exp(loga)
        t = a * math.sin(math.pi * mu * n) / math.pi
        total += -t if (n - 1) % 2 else t
        if n > 2 and a < prev and a <= ctrl.tol * abs(total) * math.pi:
            return total
        prev = a
    raise ConvergenceError(f"sine series for M_{mu}({z}) did not converge")


def mainardi_m_integral(mu: float, z: float, tol: float = 1e-13) -> float:
    """Mainardi function from a real integral with a positive integrand.

    Obtained from Zolotarev's representation of the one-sided stable density:

        M_mu(z) = z^(mu/(1-mu)) / ((1-mu) pi) * int_0^pi A(p) exp(-z^(1/(1-mu)) A(p)) dp,
        A(p) = sin(mu p)^(mu/(1-mu)) sin((1-mu) p) / sin(p)^(1/(1-mu)).

    No cancellation occurs, so this route stays accurate for large ``z``
    where the Taylor series fails. ``tol`` is the relative quadrature tolerance.
    """
    from scipy import integrate

    _check_mu(mu)
    z = float(z)
    if z < 0 or not math.isfinite(z):
        raise ParameterError(f"z must be finite and non-negative, got {z!r}")
    if z == 0.0:
        return rgamma(1.0 - mu)
    p = 1.0 / (1.0 - mu)
    log_zp = p * math.log(z)

    def f(phi):
        s = math.sin(phi)
        if s <= 0.0:
            return 0.0
        log_a = mu * p * math.log(math.sin(mu * phi)) + math.log(math.sin((1.0 - mu) * phi))
        log_a -= p * math.log(s)
        return math.exp(log_a - math.exp(log_zp + log_a))

    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=0.0, epsrel=tol, limit=200)
    return z ** (mu * p) / ((1.0 - mu) * math.pi) * val


def mainardi_half(z: float) -> float:
    """Closed form ``M_{1/2}(z) = exp(-z^2/4) / sqrt(pi)``."""
    return math.exp(-0.25 * z * z) / math.sqrt(math.pi)


def mainardi_z_max(mu: float, rel_err: float = 1e-8, z_hi: float = 60.0) -> float:
    """Largest ``z`` at which the Taylor series keeps relative error ``<= rel_err``.

    Found by bisection on :func:`mainardi_condition`, which grows with ``z``.
    """
    _check_mu(mu)

    def ok(z):
        try:
            return mainardi_condition(mu, z) <= rel_err
        except (ConvergenceError, PrecisionLossError, OverflowError):
            return False

    if ok(z_hi):
        return z_hi
    lo, hi = 0.0, z_hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            break
    return lo
