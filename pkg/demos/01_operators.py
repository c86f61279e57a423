"""Discrete Erdelyi-Kober operators on a uniform grid.

Samples e^t on [0, 1], applies the discrete integral L and the two discrete
derivatives K and G, and compares them with adaptive quadrature of the exact
operators. Halving the step roughly halves every error: the schemes are first
order for smooth data.
"""

import math

import numpy as np

from ekfrac import (
    OperatorParams,
    SampleSeries,
    apply_G,
    apply_K,
    apply_L,
    exact_derivative_quadrature,
    exact_integral_quadrature,
    integral_weights,
)
from ekfrac.studies import aitken_order

params = OperatorParams(alpha=0.25, beta=0.65)

# weights are positive and sum to 1/Gamma(beta + 1) for every n
c = integral_weights(params, 1000).c
print(f"sum c_(1000,i) = {math.fsum(c):.15f}, 1/Gamma(beta+1) = {1 / math.gamma(1.65):.15f}")
print(f"smallest weight {c.min():.3e}")

exact_i = exact_integral_quadrature(params, math.exp, 1.0)
exact_d = exact_derivative_quadrature(params, math.exp, math.exp, 1.0)
print(f"\nexact I[e^t](1) = {exact_i:.12f}, exact D[e^t](1) = {exact_d:.12f}\n")

print(f"{'n':>6} {'err L':>12} {'err K':>12} {'err G':>12}")
errs = {}
for n in (250, 500, 1000, 2000):
    s = SampleSeries.from_function(np.exp, 1.0, n)
    errs[n] = (apply_L(params, s) - exact_i, apply_K(params, s) - exact_d, apply_G(params, s) - exact_d)
    print(f"{n:6d} " + " ".join(f"{e:12.3e}" for e in errs[n]))

for n in (250, 500):
    p = [aitken_order(errs[n][k], errs[2 * n][k], errs[4 * n][k]) for k in range(3)]
    print(f"Aitken order at n={n}: L {p[0]:.3f}, K {p[1]:.3f}, G {p[2]:.3f}")
