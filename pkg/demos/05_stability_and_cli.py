"""Stability of the scheme and the ``ek`` command line.

Random coefficient vectors are marched for 200 steps across a grid of
(alpha, beta); the norm never exceeds sqrt(2) times its initial value. The
same sweep is available as ``ek stability-sweep`` and writes CSV.
"""

import math

from ekfrac.cli import main
from ekfrac.studies import StudySpec, stability_sweep

grid = (0.15, 0.35, 0.65, 0.9)
rows = stability_sweep(StudySpec("stability-sweep", alphas=grid, betas=grid, N=16, n_steps=200))
print(f"{'alpha':>6} {'beta':>6} {'max ratio':>10}")
for a, b, ratio, ok in rows:
    print(f"{a:6.2f} {b:6.2f} {ratio:10.6f}{'' if ok else '  UNSTABLE'}")
print(f"bound sqrt(2) = {math.sqrt(2):.6f}")

print("\n$ ek weights --alpha 0.5 --beta 0.5 --n 4 --with-d")
main(["weights", "--alpha", "0.5", "--beta", "0.5", "--n", "4", "--with-d"])
