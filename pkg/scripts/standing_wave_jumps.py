"""Standing waves of the unit-jump lattice equation: jump size against gamma.

For f = kpp(gamma) and m = delta_1, c(lam) = (exp(-lam) - 1 + gamma)/lam, so
c* < 0 for gamma < 1 and c* = 0 from gamma = 1 on.  Once f'(0) = gamma > 1 the
standing profile is expected to jump.  Jumps are measured on dx and dx/2; a
jump that survives refinement is genuine.

    python3 scripts/standing_wave_jumps.py
"""

from frontlab.grid import Grid
from frontlab.measure import DispersalMeasure
from frontlab.nonlinearity import kpp
from frontlab.waves import RecursionConfig, detect_jump, standing_wave_solve

m = DispersalMeasure.dirac(1.0)
g = Grid(-30.0, 30.0, 1201)
print(f"{'gamma':>6s} {'conv':>5s} {'jump dx':>9s} {'jump dx/2':>10s} {'residual':>9s}")
for gamma in (0.3, 0.5, 0.8, 1.2, 1.5, 2.0, 3.0):
    f = kpp(gamma)
    row = []
    for grid in (g, g.refined()):
        res = standing_wave_solve(m, f, RecursionConfig(), grid)
        row.append((res.converged, detect_jump(res.psi)[0], res.residual))
    print(f"{gamma:6.2f} {str(row[0][0] and row[1][0]):>5s} {row[0][1]:9.4f} {row[1][1]:10.4f} "
          f"{max(row[0][2], row[1][2]):9.2e}")
