"""Mainardi function and the fundamental solution.

The Taylor series of M_mu is alternating and loses digits as z grows, so the
library reports the range where it can be trusted and offers an integral
representation beyond it. For beta = 1 the fundamental solution is a Gaussian
and its convolution with exp(-x^2/2) has a closed form.
"""

import math

from ekfrac import OperatorParams, convolve_oracle, exact_gaussian_beta1, green
from ekfrac.errors import PrecisionLossError
from ekfrac.specfun import mainardi_half, mainardi_m, mainardi_m_integral, mainardi_z_max

for mu in (0.1, 0.25, 0.5):
    print(f"mu={mu:<5} series reliable up to z = {mainardi_z_max(mu):.2f}")

print("\nM_(1/2) against its closed form")
for z in (0.0, 1.0, 2.5, 5.0):
    print(f"  z={z:3.1f} series {mainardi_m(0.5, z):.15f} closed {mainardi_half(z):.15f}")

try:
    mainardi_m(0.25, 12.0)
except PrecisionLossError as exc:
    print(f"\nseries at z=12 refused: {exc}")
print(f"integral route at z=12: {mainardi_m_integral(0.25, 12.0):.6e}")

params = OperatorParams(0.5, 0.5)
print("\nfundamental solution, alpha=0.5, beta=0.5, t=1")
for x in (0.0, 0.5, 1.0, 2.0, 4.0):
    print(f"  x={x:3.1f}  {green(params, 1.0, x, method='auto'):.10f}")

heat = OperatorParams(0.65, 1.0)
gauss = lambda y: math.exp(-0.5 * y * y)  # noqa: E731
print("\nbeta=1: convolution of the kernel with exp(-x^2/2) against the closed form")
for t, x in ((0.5, 0.0), (1.0, 1.0), (2.0, -2.0)):
    print(f"  t={t}, x={x:+.1f}: {convolve_oracle(heat, gauss, t, x):.14f} "
          f"{exact_gaussian_beta1(0.65, t, x):.14f}")
