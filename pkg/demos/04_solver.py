"""Solving the Erdelyi-Kober diffusion equation.

Marches Gaussian data to t = 1 for beta = 1, where the exact solution is known,
and prints the L2 error as the time step shrinks. The observed slope sits
between 1/2 and alpha. A sub-diffusive case (beta < 1) follows, where the
order is estimated from successive refinements.
"""

import numpy as np

from ekfrac import OperatorParams, SolverConfig, exact_gaussian_beta1, gauss_hermite, l2_error, run
from ekfrac.studies import StudySpec, loglog_slope, solver_convergence_study

gauss = lambda x: np.exp(-0.5 * x * x)  # noqa: E731
alpha = 0.65
params = OperatorParams(alpha, 1.0)
big = gauss_hermite(200)

steps = [32, 64, 128, 256, 512, 1024]
errs = []
print(f"{'steps':>6} {'L2 error':>12} {'max ratio':>10}")
for m in steps:
    rep = run(SolverConfig(params, N=30, n_steps=m), gauss)
    errs.append(l2_error(rep.final, lambda x: exact_gaussian_beta1(alpha, 1.0, x), big))
    print(f"{m:6d} {errs[-1]:12.4e} {rep.max_ratio:10.6f}")
print(f"log-log slope {-loglog_slope(steps, errs):.3f} (alpha = {alpha})")

print("\nalpha=0.7, beta=0.15, N=5: order from ||U^m - U^2m||")
spec = StudySpec("solver-order", OperatorParams(0.7, 0.15), (250, 500, 1000), "gauss", N=5)
for m, e, p in solver_convergence_study(spec):
    print(f"  m={m:5d} diff {e:.4e} order {p:.3f}")
