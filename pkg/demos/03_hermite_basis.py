"""Hermite functions as a spectral basis on the real line.

Builds a Gauss-Hermite rule, checks orthonormality of the basis and shows the
fast decay of projection errors for a shifted Gaussian against the
algebraic decay for the Lorentzian 1/(1+x^2).
"""

import numpy as np

from ekfrac import gauss_hermite, hermite_functions, l2_error, project, stiffness

N = 30
rule = gauss_hermite(2 * N + 40)
H = hermite_functions(N, rule.nodes)
gram = (H * rule.scaled_weights) @ H.T
print(f"max |Gram - I| for N={N}: {np.abs(gram - np.eye(N + 1)).max():.2e}")

S = stiffness(6).matrix()
print("\nstiffness matrix for N=6 (couples only indices of equal parity):")
print(np.array2string(S, precision=3, suppress_small=True))

gauss = lambda x: np.exp(-0.5 * (x - 1.5) ** 2)  # noqa: E731
lorentz = lambda x: 1.0 / (1.0 + x * x)  # noqa: E731
big = gauss_hermite(400)
print(f"\n{'N':>3} {'gauss L2 err':>14} {'lorentz L2 err':>15}")
for n in (4, 8, 16, 32, 64):
    g = project(gauss, n, big, tail_tol=None)
    lz = project(lorentz, n, big, tail_tol=None)
    print(f"{n:3d} {l2_error(g, gauss, big):14.3e} {l2_error(lz, lorentz, big):15.3e}")
