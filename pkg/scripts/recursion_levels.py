"""How the floored recursion converges in the floor level k, near and away from c*.

    python3 scripts/recursion_levels.py [c ...]
"""

import sys
import time

from frontlab.grid import Grid
from frontlab.measure import DispersalMeasure
from frontlab.nonlinearity import kpp
from frontlab.waves import RecursionConfig, weinberger_recursion

m = DispersalMeasure.from_atoms([(-1.0, 0.5), (1.0, 0.5)])
f = kpp(1.0)
g = Grid(-40.0, 40.0, 1601)
speeds = [float(a) for a in sys.argv[1:]] or [1.52, 1.55, 1.7, 2.0]
for c in speeds:
    t0 = time.perf_counter()
    res = weinberger_recursion(m, f, c, RecursionConfig(), g)
    print(f"c={c:.3f} converged={res.converged} residual={res.residual:.2e} "
          f"reason='{res.reason}' sweeps={res.iterations} ({time.perf_counter() - t0:.1f}s)")
    for h in res.level_history:
        print(f"    k={h['k']:2d} sweeps={h['sweeps']:5d} pin_shift={h['pin_shift']:4d} gap={h['level_gap']:.2e}")
