"""Exact selection of the non-diverging branch for constant frequency.

For p = 1, q = kappa^2 (Im kappa > 0) the decaying solution at x -> +inf
has F = p f'/f = i kappa exactly.  Any particular solution of the g system
works: solving the additive constant at the far end and rebuilding F lands
on i kappa regardless of the launch state, to near machine precision.
"""

import schwarzian_sl as s
from schwarzian_sl.schwarzian import Approach

tol = s.Tolerances(rel=1e-11, abs=1e-13)
launches = [(0j, 0j, 0j), (0.3 + 0.2j, 0j, 0j), (-0.4j, 0.1 + 0j, 0.2 + 0.1j)]

for kappa in (1j, 1 + 1j, 2 + 0.5j):
    problem = s.const_oscillator(kappa)
    print(f"kappa = {kappa}:  target F = i kappa = {1j * kappa}")
    for launch in launches:
        tr = s.integrate(s.g_system(problem), 0.0, 30.0, launch, 0j, tol)
        c = s.solve_constant_from_bc(
            tr.y_end, complex(float("inf"), 0.0), Approach.G
        )
        F = s.reconstruct_F(tr.y_end, c, Approach.G)
        print(f"  launch {str(launch):38s} ->  F = {F:.12f}   "
              f"|F - i kappa| = {abs(F - 1j * kappa):.2e}")
